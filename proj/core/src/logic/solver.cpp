#include "parasafe/logic/solver.hpp"

#include "parasafe/logic/errors.hpp"

#include <functional>

namespace parasafe::logic
{

namespace
{

using Clause = std::vector<const Formula*>;

class Searcher
{
public:
    explicit Searcher( std::size_t max ) : _max( max ) {}

    bool run( CongruenceClosure& cc, std::vector<const Formula*> todo, std::vector<Clause> clauses )
    {
        for ( ;; )
        {
            while ( !todo.empty() )
            {
                const Formula* f = todo.back();
                todo.pop_back();
                switch ( f->kind )
                {
                case Formula::Kind::True:
                    break;
                case Formula::Kind::False:
                    return false;
                case Formula::Kind::Lit:
                    if ( !cc.assert_literal( f->lit ) )
                        return false;
                    break;
                case Formula::Kind::And:
                    for ( const auto& k : f->kids )
                        todo.push_back( &k );
                    break;
                case Formula::Kind::Or:
                {
                    Clause c;
                    c.reserve( f->kids.size() );
                    for ( const auto& k : f->kids )
                        c.push_back( &k );
                    clauses.push_back( std::move( c ) );
                    break;
                }
                case Formula::Kind::Not:
                    throw std::logic_error( "ground search expects negation normal form" );
                }
            }

            // Drop satisfied clauses, prune refuted alternatives, propagate units.
            std::vector<Clause> open;
            open.reserve( clauses.size() );
            for ( auto& c : clauses )
            {
                Clause kept;
                bool satisfied = false;
                for ( const Formula* k : c )
                {
                    if ( k->kind == Formula::Kind::Lit )
                    {
                        auto v = cc.evaluate( k->lit );
                        if ( v && *v )
                        {
                            satisfied = true;
                            break;
                        }
                        if ( v && !*v )
                            continue;
                    }
                    kept.push_back( k );
                }
                if ( satisfied )
                    continue;
                if ( kept.empty() )
                    return false;
                if ( kept.size() == 1 )
                    todo.push_back( kept.front() );
                else
                    open.push_back( std::move( kept ) );
            }
            clauses = std::move( open );
            if ( todo.empty() )
                break;
        }
        if ( clauses.empty() )
            return true;

        std::size_t best = 0;
        for ( std::size_t i = 1; i < clauses.size(); ++i )
            if ( clauses[i].size() < clauses[best].size() )
                best = i;
        Clause pick = std::move( clauses[best] );
        clauses.erase( clauses.begin() + static_cast<std::ptrdiff_t>( best ) );

        for ( const Formula* k : pick )
        {
            if ( _max != 0 && ++_branches > _max )
            {
                _exhausted = true;
                return false;
            }
            CongruenceClosure branch = cc;
            if ( run( branch, { k }, clauses ) )
                return true;
            if ( _exhausted )
                return false;
        }
        return false;
    }

    [[nodiscard]] bool exhausted() const { return _exhausted; }

private:
    std::size_t _max;
    std::size_t _branches = 0;
    bool _exhausted = false;
};

} // namespace

SearchResult ground_search( CongruenceClosure cc, const std::vector<Formula>& conjuncts, std::size_t max_branches )
{
    if ( !cc.consistent() )
        return SearchResult::Unsat;
    Searcher s( max_branches );
    std::vector<const Formula*> todo;
    todo.reserve( conjuncts.size() );
    for ( const auto& f : conjuncts )
        todo.push_back( &f );
    if ( s.run( cc, std::move( todo ), {} ) )
        return SearchResult::Sat;
    return s.exhausted() ? SearchResult::Unknown : SearchResult::Unsat;
}

std::vector<std::vector<VarId>> alldiff_partitions( const std::vector<SortId>& sorts )
{
    std::vector<std::vector<VarId>> out;
    std::vector<VarId> rep( sorts.size() );
    std::function<void( std::size_t )> rec = [&]( std::size_t i ) {
        if ( i == sorts.size() )
        {
            out.push_back( rep );
            return;
        }
        // join an earlier block of the same sort, or open a new one
        for ( std::size_t j = 0; j < i; ++j )
        {
            if ( rep[j] == j && sorts[j] == sorts[i] )
            {
                rep[i] = static_cast<VarId>( j );
                rec( i + 1 );
            }
        }
        rep[i] = static_cast<VarId>( i );
        rec( i + 1 );
    };
    rec( 0 );
    return out;
}

std::vector<std::vector<VarId>> sort_matching_maps( const std::vector<SortId>& from, const std::vector<SortId>& to,
                                                    bool injective )
{
    std::vector<std::vector<VarId>> out;
    std::vector<VarId> map( from.size() );
    std::vector<bool> used( to.size(), false );
    std::function<void( std::size_t )> rec = [&]( std::size_t i ) {
        if ( i == from.size() )
        {
            out.push_back( map );
            return;
        }
        for ( std::size_t t = 0; t < to.size(); ++t )
        {
            if ( to[t] != from[i] || ( injective && used[t] ) )
                continue;
            map[i] = static_cast<VarId>( t );
            used[t] = true;
            rec( i + 1 );
            used[t] = false;
        }
    };
    rec( 0 );
    return out;
}

bool sat_exists_forall( const Signature& sig, const EFFormula& f, const SolverOptions& opts )
{
    std::vector<SortId> all = f.exists;
    all.insert( all.end(), f.forall.begin(), f.forall.end() );
    check_formula( sig, all, f.matrix );
    for ( auto s : f.forall )
        if ( sig.sort( s ).kind != SortKind::Index )
            throw IllTypedError( "universal variable of non-index sort '" + sig.sort( s ).name + "'" );

    const Formula matrix = nnf( f.matrix );
    const std::size_t e = f.exists.size();

    for ( const auto& rep : alldiff_partitions( f.exists ) )
    {
        std::vector<VarId> reps;
        std::vector<SortId> rep_sorts;
        for ( std::size_t i = 0; i < e; ++i )
        {
            if ( rep[i] == i )
            {
                reps.push_back( static_cast<VarId>( i ) );
                rep_sorts.push_back( f.exists[i] );
            }
        }

        std::vector<Formula> instances;
        for ( const auto& inst : sort_matching_maps( f.forall, rep_sorts, false ) )
        {
            std::vector<VarId> map( all.size() );
            for ( std::size_t i = 0; i < e; ++i )
                map[i] = rep[i];
            for ( std::size_t u = 0; u < f.forall.size(); ++u )
                map[e + u] = reps[inst[u]];
            instances.push_back( rename( matrix, map ) );
        }

        switch ( ground_search( CongruenceClosure{}, instances, opts.max_branches ) )
        {
        case SearchResult::Sat:
            return true;
        case SearchResult::Unsat:
            break;
        case SearchResult::Unknown:
            throw BudgetExceeded( "exists-forall search exceeded " + std::to_string( opts.max_branches ) + " branches" );
        }
    }
    return false;
}

} // namespace parasafe::logic
