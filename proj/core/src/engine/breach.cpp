#include "parasafe/engine/breach.hpp"

#include "parasafe/engine/preimage.hpp"
#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/euf.hpp"
#include "parasafe/logic/solver.hpp"

#include <map>
#include <set>

namespace parasafe::engine
{

using logic::Cube;
using logic::Literal;
using logic::Term;

const char* to_string( Verdict::Kind k )
{
    switch ( k )
    {
    case Verdict::Kind::Safe:
        return "SAFE";
    case Verdict::Kind::Unsafe:
        return "UNSAFE";
    case Verdict::Kind::Unknown:
        return "UNKNOWN";
    }
    return "?";
}

const char* to_string( Verdict::Reason r )
{
    switch ( r )
    {
    case Verdict::Reason::None:
        return "none";
    case Verdict::Reason::DepthBudget:
        return "depth-budget";
    case Verdict::Reason::CubeBudget:
        return "cube-budget";
    }
    return "?";
}

namespace
{

bool ground( const Literal& l )
{
    return std::none_of( l.args.begin(), l.args.end(), []( const Term& t ) { return t.mentions_var(); } );
}

std::vector<std::size_t> sort_counts( const Cube& c, std::size_t sorts )
{
    std::vector<std::size_t> n( sorts, 0 );
    for ( auto s : c.vars )
        ++n[s];
    return n;
}

} // namespace

bool entailed( const encoder::AbPmas& s, const Cube& c, const std::vector<const Cube*>& region, std::size_t max_branches )
{
    logic::CongruenceClosure cc;
    for ( const auto& l : c.lits )
        if ( !cc.assert_literal( l ) )
            return true;
    const auto counts = sort_counts( c, s.sig.sort_count() );

    std::vector<logic::Formula> clauses;
    for ( const Cube* d : region )
    {
        if ( d->vars.size() > c.vars.size() )
            continue;
        const auto dc = sort_counts( *d, s.sig.sort_count() );
        bool fits = true;
        for ( std::size_t i = 0; i < dc.size() && fits; ++i )
            fits = dc[i] <= counts[i];
        if ( !fits )
            continue;
        bool refuted = false;
        for ( const auto& l : d->lits )
            if ( ground( l ) && cc.evaluate( l ) == false )
            {
                refuted = true;
                break;
            }
        if ( refuted )
            continue;

        for ( const auto& m : logic::sort_matching_maps( d->vars, c.vars, true ) )
        {
            std::vector<logic::Formula> alts;
            bool satisfied = false;
            for ( const auto& l : d->lits )
            {
                auto neg = logic::rename( l, m ).negated();
                auto v = cc.evaluate( neg );
                if ( v == true )
                {
                    satisfied = true;
                    break;
                }
                if ( v == false )
                    continue;
                alts.push_back( logic::Formula::literal( std::move( neg ) ) );
            }
            if ( satisfied )
                continue;
            if ( alts.empty() )
                return true;
            clauses.push_back( logic::Formula::disj( std::move( alts ) ) );
        }
    }
    if ( clauses.empty() )
        return false;
    return logic::ground_search( cc, clauses, max_branches ) == logic::SearchResult::Unsat;
}

namespace
{

class Search
{
public:
    Search( const encoder::AbPmas& s, const Budgets& b, Frontier& f ) : _s( s ), _b( b ), _f( f ) {}

    Verdict run( const logic::StateFormula& goal )
    {
        Verdict v;
        struct Candidate
        {
            Cube cube;
            std::size_t rule;
            std::size_t parent;
        };
        std::vector<Candidate> layer;
        for ( const auto& c : goal.cubes )
        {
            Cube k = c;
            if ( normalize_cube( _s.sig, k ) )
                layer.push_back( { std::move( k ), 0, SIZE_MAX } );
        }

        for ( std::size_t depth = 0;; ++depth )
        {
            v.depth = depth;
            _f.layer_start.push_back( _f.cubes.size() );
            std::vector<std::size_t> fresh;
            for ( auto& cand : layer )
            {
                if ( !_seen.insert( cand.cube ).second )
                    continue;
                if ( covered( cand.cube ) )
                    continue;
                const auto id = _f.cubes.size();
                _f.cubes.push_back( { std::move( cand.cube ), depth, cand.rule, cand.parent } );
                _buckets[phase_of( _f.cubes[id].cube )].push_back( id );
                fresh.push_back( id );
                if ( _f.cubes.size() > _b.max_cubes )
                {
                    v.kind = Verdict::Kind::Unknown;
                    v.reason = Verdict::Reason::CubeBudget;
                    v.cubes = _f.cubes.size();
                    return v;
                }
            }
            v.cubes = _f.cubes.size();
            if ( fresh.empty() )
            {
                v.kind = Verdict::Kind::Safe;
                return v;
            }
            for ( auto id : fresh )
                if ( intersects_init( _s, _f.cubes[id].cube ) )
                {
                    v.kind = Verdict::Kind::Unsafe;
                    v.trace = trace( id );
                    if ( _s.semantics == encoder::Semantics::Concurrent )
                        for ( const auto& st : v.trace )
                            v.spurious_possible = v.spurious_possible || !_s.rules[st.rule].uguards.empty();
                    return v;
                }
            if ( depth >= _b.max_depth )
            {
                v.kind = Verdict::Kind::Unknown;
                v.reason = Verdict::Reason::DepthBudget;
                return v;
            }

            layer.clear();
            try
            {
                for ( auto id : fresh )
                    for ( std::size_t r = 0; r < _s.rules.size(); ++r )
                        for ( auto& k : preimage( _s, _s.rules[r], _f.cubes[id].cube, _b.max_cubes ) )
                        {
                            layer.push_back( { std::move( k ), r, id } );
                            if ( layer.size() > _b.max_cubes )
                                throw logic::BudgetExceeded( "layer exceeds the cube budget" );
                        }
            }
            catch ( const logic::BudgetExceeded& e )
            {
                v.kind = Verdict::Kind::Unknown;
                v.reason = Verdict::Reason::CubeBudget;
                v.detail = e.what();
                return v;
            }
        }
    }

private:
    // Phase constant fixed by the cube, or SIZE_MAX.
    [[nodiscard]] std::size_t phase_of( const Cube& c ) const
    {
        for ( const auto& l : c.lits )
            if ( l.kind == Literal::Kind::Eq && l.positive && l.args[0] == Term::global( _s.phase ) && l.args[1].is_const() )
                return l.args[1].id;
        return SIZE_MAX;
    }

    bool covered( const Cube& c )
    {
        std::vector<const Cube*> region;
        auto scan = [&]( std::size_t key ) {
            auto it = _buckets.find( key );
            if ( it == _buckets.end() )
                return false;
            for ( auto id : it->second )
            {
                const auto& d = _f.cubes[id].cube;
                if ( embeds( d, c ) )
                    return true;
                region.push_back( &d );
            }
            return false;
        };
        const auto p = phase_of( c );
        if ( scan( p ) )
            return true;
        if ( p != SIZE_MAX && scan( SIZE_MAX ) )
            return true;
        if ( p == SIZE_MAX )
            for ( const auto& [key, ids] : _buckets )
                if ( key != SIZE_MAX && scan( key ) )
                    return true;
        return !region.empty() && entailed( _s, c, region, _b.entailment_branches );
    }

    std::vector<TraceStep> trace( std::size_t id ) const
    {
        std::vector<TraceStep> out;
        while ( _f.cubes[id].parent != SIZE_MAX )
        {
            const auto& fc = _f.cubes[id];
            const auto& r = _s.rules[fc.rule];
            out.push_back( { fc.rule, r.label, r.kind, r.action, r.tmpl } );
            id = fc.parent;
        }
        return out;
    }

    const encoder::AbPmas& _s;
    const Budgets& _b;
    Frontier& _f;
    std::set<Cube> _seen;
    std::map<std::size_t, std::vector<std::size_t>> _buckets;
};

} // namespace

Verdict breach( const encoder::AbPmas& s, const logic::StateFormula& goal, const Budgets& budgets, Frontier* frontier )
{
    Frontier local;
    return Search( s, budgets, frontier ? *frontier : local ).run( goal );
}

} // namespace parasafe::engine
