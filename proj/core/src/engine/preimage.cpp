#include "parasafe/engine/preimage.hpp"

#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/euf.hpp"
#include "parasafe/logic/reduce.hpp"
#include "parasafe/logic/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace parasafe::engine
{

using logic::Cube;
using logic::Formula;
using logic::Literal;
using logic::Term;
using logic::VarId;

namespace
{

// Resolves literals that are decided syntactically. nullopt: keep; true/false: decided.
std::optional<bool> decided( const Literal& l )
{
    if ( l.kind != Literal::Kind::Eq )
        return std::nullopt;
    const auto& a = l.args[0];
    const auto& b = l.args[1];
    if ( a == b )
        return l.positive;
    if ( ( a.is_const() && b.is_const() ) || ( a.is_var() && b.is_var() ) )
        return !l.positive;
    return std::nullopt;
}

void orient( Literal& l )
{
    if ( l.kind != Literal::Kind::Eq )
        return;
    auto& a = l.args[0];
    auto& b = l.args[1];
    if ( a.is_const() && !b.is_const() )
        std::swap( a, b );
    else if ( !a.is_const() && !b.is_const() && b < a )
        std::swap( a, b );
}

Term subst_bound( const Term& t, VarId v )
{
    if ( t.kind == Term::Kind::Var && t.id == logic::kBoundVar )
        return Term::var( v );
    if ( t.kind == Term::Kind::Read && t.index == logic::kBoundVar )
        return Term::read( t.id, v );
    return t;
}

Literal subst_bound( const Literal& l, VarId v )
{
    Literal out = l;
    for ( auto& a : out.args )
        a = subst_bound( a, v );
    return out;
}

// Literals of a conjunctive guard formula.
void guard_literals( const Formula& f, std::vector<Literal>& out )
{
    switch ( f.kind )
    {
    case Formula::Kind::True:
        return;
    case Formula::Kind::Lit:
        out.push_back( f.lit );
        return;
    case Formula::Kind::And:
        for ( const auto& k : f.kids )
            guard_literals( k, out );
        return;
    default:
        throw logic::EncodingError( "bulk update guard is not a conjunction of literals" );
    }
}

struct Alternative
{
    std::vector<Literal> cond;
    Term value;
};

class PreimageBuilder
{
public:
    PreimageBuilder( const encoder::AbPmas& s, const encoder::TransitionRule& r, const Cube& c, std::size_t cap )
        : _s( s ), _r( r ), _c( c ), _cap( cap )
    {
    }

    std::vector<Cube> run()
    {
        _vars = _r.vars;
        _map.assign( _c.vars.size(), 0 );
        std::vector<bool> used( _r.vars.size(), false );
        match( 0, used );
        return std::move( _out );
    }

private:
    // Identifies each cube variable with an unused rule variable of its sort, or keeps it apart.
    void match( std::size_t k, std::vector<bool>& used )
    {
        if ( k == _c.vars.size() )
        {
            expand();
            return;
        }
        for ( std::size_t v = 0; v < _r.vars.size(); ++v )
        {
            if ( used[v] || _r.vars[v] != _c.vars[k] )
                continue;
            used[v] = true;
            _map[k] = static_cast<VarId>( v );
            match( k + 1, used );
            used[v] = false;
        }
        _map[k] = static_cast<VarId>( _vars.size() );
        _vars.push_back( _c.vars[k] );
        match( k + 1, used );
        _vars.pop_back();
    }

    [[nodiscard]] const encoder::BulkUpdate* bulk_of( logic::ArrayId a ) const
    {
        for ( const auto& b : _r.bulk )
            if ( b.array == a )
                return &b;
        return nullptr;
    }

    [[nodiscard]] std::optional<Term> assigned( const Term& t ) const
    {
        for ( const auto& [lhs, rhs] : _r.assigns )
            if ( lhs == t )
                return rhs;
        return std::nullopt;
    }

    void expand()
    {
        std::vector<Literal> lits;
        for ( const auto& l : _c.lits )
            lits.push_back( logic::rename( l, _map ) );

        // Terms read through a bulk update, each resolved once.
        std::vector<Term> choice_terms;
        std::vector<std::vector<Alternative>> choices;
        for ( const auto& l : lits )
            for ( const auto& t : l.args )
            {
                if ( t.kind != Term::Kind::Read )
                    continue;
                const auto* b = bulk_of( t.id );
                if ( !b || std::find( choice_terms.begin(), choice_terms.end(), t ) != choice_terms.end() )
                    continue;
                choice_terms.push_back( t );
                std::vector<Alternative> alts;
                std::vector<Literal> otherwise;
                for ( std::size_t i = 0; i < b->guards.size(); ++i )
                {
                    Alternative a;
                    std::vector<Literal> g;
                    guard_literals( b->guards[i], g );
                    for ( auto& gl : g )
                        a.cond.push_back( subst_bound( gl, t.index ) );
                    if ( a.cond.size() != 1 )
                        throw logic::EncodingError( "bulk update with compound guards" );
                    a.value = subst_bound( b->values[i], t.index );
                    for ( const auto& cl : a.cond )
                        otherwise.push_back( cl.negated() );
                    alts.push_back( std::move( a ) );
                }
                alts.push_back( { std::move( otherwise ), subst_bound( b->otherwise, t.index ) } );
                choices.push_back( std::move( alts ) );
            }

        logic::CongruenceClosure cc;
        std::vector<Literal> trail;
        for ( const auto& g : _r.guard )
        {
            if ( !cc.assert_literal( g ) )
                return;
            trail.push_back( g );
        }
        std::vector<Term> values( choice_terms.size() );
        choose( 0, cc, trail, lits, choice_terms, choices, values );
    }

    void choose( std::size_t i, const logic::CongruenceClosure& cc, std::vector<Literal>& trail,
                 const std::vector<Literal>& lits, const std::vector<Term>& terms,
                 const std::vector<std::vector<Alternative>>& choices, std::vector<Term>& values )
    {
        if ( i == terms.size() )
        {
            finish( cc, trail, lits, terms, values );
            return;
        }
        for ( const auto& alt : choices[i] )
        {
            auto next = cc;
            const auto mark = trail.size();
            bool ok = true;
            for ( const auto& l : alt.cond )
            {
                if ( !next.assert_literal( l ) )
                {
                    ok = false;
                    break;
                }
                trail.push_back( l );
            }
            if ( ok )
            {
                values[i] = alt.value;
                choose( i + 1, next, trail, lits, terms, choices, values );
            }
            trail.resize( mark );
        }
    }

    [[nodiscard]] Term post( const Term& t, const std::vector<Term>& terms, const std::vector<Term>& values ) const
    {
        if ( auto a = assigned( t ) )
            return *a;
        for ( std::size_t i = 0; i < terms.size(); ++i )
            if ( terms[i] == t )
                return values[i];
        return t;
    }

    void finish( logic::CongruenceClosure cc, std::vector<Literal>& trail, const std::vector<Literal>& lits,
                 const std::vector<Term>& terms, const std::vector<Term>& values )
    {
        const auto mark = trail.size();
        for ( const auto& l : lits )
        {
            Literal pre = l;
            for ( auto& a : pre.args )
                a = post( a, terms, values );
            if ( auto d = decided( pre ) )
            {
                if ( !*d )
                {
                    trail.resize( mark );
                    return;
                }
                continue;
            }
            if ( !cc.assert_literal( pre ) )
            {
                trail.resize( mark );
                return;
            }
            trail.push_back( std::move( pre ) );
        }

        // Universal guards, instantiated over the variables of the produced cube.
        std::vector<std::vector<std::vector<Literal>>> instances;
        const auto n = static_cast<VarId>( _r.vars.size() );
        for ( const auto& u : _r.uguards )
            for ( const auto& m : logic::sort_matching_maps( u.vars, _vars, false ) )
            {
                std::vector<VarId> ren( n + u.vars.size() );
                for ( VarId v = 0; v < n; ++v )
                    ren[v] = v;
                for ( std::size_t k = 0; k < u.vars.size(); ++k )
                    ren[n + k] = m[k];
                auto inst = logic::nnf( logic::rename( u.matrix, ren ) );
                auto cubes = logic::dnf( inst, _cap );
                instances.push_back( std::move( cubes ) );
            }
        instantiate( 0, cc, trail, instances );
        trail.resize( mark );
    }

    void instantiate( std::size_t i, const logic::CongruenceClosure& cc, std::vector<Literal>& trail,
                      const std::vector<std::vector<std::vector<Literal>>>& instances )
    {
        if ( i == instances.size() )
        {
            Cube out{ _vars, trail };
            if ( normalize_cube( _s.sig, out ) )
            {
                if ( _out.size() >= _cap )
                    throw logic::BudgetExceeded( "preimage exceeds " + std::to_string( _cap ) + " cubes" );
                _out.push_back( std::move( out ) );
            }
            return;
        }
        for ( const auto& alt : instances[i] )
        {
            auto next = cc;
            const auto mark = trail.size();
            bool ok = true;
            for ( const auto& l : alt )
            {
                if ( auto d = decided( l ) )
                {
                    if ( !*d )
                    {
                        ok = false;
                        break;
                    }
                    continue;
                }
                if ( !next.assert_literal( l ) )
                {
                    ok = false;
                    break;
                }
                trail.push_back( l );
            }
            if ( ok )
                instantiate( i + 1, next, trail, instances );
            trail.resize( mark );
        }
    }

    const encoder::AbPmas& _s;
    const encoder::TransitionRule& _r;
    const Cube& _c;
    std::size_t _cap;
    std::vector<logic::SortId> _vars;
    std::vector<VarId> _map;
    std::vector<Cube> _out;
};

} // namespace

bool normalize_cube( const logic::Signature& /*sig*/, Cube& c )
{
    std::vector<Literal> lits;
    lits.reserve( c.lits.size() );
    for ( auto l : c.lits )
    {
        if ( auto d = decided( l ) )
        {
            if ( !*d )
                return false;
            continue;
        }
        orient( l );
        lits.push_back( std::move( l ) );
    }
    std::sort( lits.begin(), lits.end() );
    lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );

    // t != c is implied by t = c' for another constant c'
    std::map<Term, Term> fixed;
    for ( const auto& l : lits )
        if ( l.kind == Literal::Kind::Eq && l.positive && l.args[1].is_const() )
        {
            auto [it, fresh] = fixed.emplace( l.args[0], l.args[1] );
            if ( !fresh && it->second != l.args[1] )
                return false;
        }
    std::erase_if( lits, [&]( const Literal& l ) {
        if ( l.kind != Literal::Kind::Eq || l.positive || !l.args[1].is_const() )
            return false;
        auto it = fixed.find( l.args[0] );
        return it != fixed.end() && it->second != l.args[1];
    } );

    logic::CongruenceClosure cc;
    for ( const auto& l : lits )
        if ( !cc.assert_literal( l ) )
            return false;
    c.lits = std::move( lits );
    return true;
}

std::vector<Cube> preimage( const encoder::AbPmas& s, const encoder::TransitionRule& r, const Cube& c, std::size_t max_cubes )
{
    return PreimageBuilder( s, r, c, max_cubes ).run();
}

logic::StateFormula preimage( const encoder::AbPmas& s, const encoder::TransitionRule& r, const logic::StateFormula& phi,
                              std::size_t max_cubes )
{
    logic::StateFormula out;
    for ( const auto& c : phi.cubes )
    {
        auto cubes = preimage( s, r, c, max_cubes );
        if ( out.cubes.size() + cubes.size() > max_cubes )
            throw logic::BudgetExceeded( "preimage exceeds " + std::to_string( max_cubes ) + " cubes" );
        for ( auto& k : cubes )
            out.cubes.push_back( std::move( k ) );
    }
    return out;
}

std::vector<Cube> preimage_by_reduction( const encoder::AbPmas& s, const encoder::TransitionRule& r, const Cube& c )
{
    using logic::UExpr;
    using logic::UFormula;
    std::vector<Cube> out;
    const auto n = static_cast<VarId>( r.vars.size() );

    // a' as a function of the cell it is read at
    auto updated = [&]( const Term& t ) -> UExpr {
        for ( const auto& [lhs, rhs] : r.assigns )
            if ( lhs.kind == Term::Kind::Global && t.kind == Term::Kind::Global && lhs.id == t.id )
                return UExpr::plain( rhs );
        if ( t.kind != Term::Kind::Read )
            return UExpr::plain( t );
        for ( const auto& b : r.bulk )
            if ( b.array == t.id )
            {
                std::vector<UFormula> guards;
                std::vector<UExpr> values;
                for ( std::size_t i = 0; i < b.guards.size(); ++i )
                {
                    guards.push_back( UFormula::lift( b.guards[i] ) );
                    values.push_back( UExpr::plain( b.values[i] ) );
                }
                values.push_back( UExpr::plain( b.otherwise ) );
                return UExpr::apply( UExpr::cases( std::move( guards ), std::move( values ), true ),
                                     Term::var( t.index ) );
            }
        std::vector<UFormula> guards;
        std::vector<UExpr> values;
        for ( const auto& [lhs, rhs] : r.assigns )
            if ( lhs.kind == Term::Kind::Read && lhs.id == t.id )
            {
                guards.push_back( UFormula::eq( UExpr::plain( Term::var( logic::kBoundVar ) ),
                                                UExpr::plain( Term::var( lhs.index ) ) ) );
                values.push_back( UExpr::plain( rhs ) );
            }
        if ( guards.empty() )
            return UExpr::plain( t );
        values.push_back( UExpr::plain( Term::read( t.id, logic::kBoundVar ) ) );
        return UExpr::apply( UExpr::cases( std::move( guards ), std::move( values ), true ), Term::var( t.index ) );
    };

    // every identification of cube variables with rule variables
    std::vector<logic::SortId> vars = r.vars;
    std::vector<VarId> map( c.vars.size() );
    std::function<void( std::size_t, std::vector<bool>& )> rec = [&]( std::size_t k, std::vector<bool>& used ) {
        if ( k == c.vars.size() )
        {
            std::vector<UFormula> parts;
            for ( const auto& g : r.guard )
                parts.push_back( UFormula::lift( g ) );
            for ( const auto& l : c.lits )
            {
                auto rl = logic::rename( l, map );
                std::vector<UExpr> args;
                for ( const auto& a : rl.args )
                    args.push_back( updated( a ) );
                UFormula atom = rl.kind == Literal::Kind::Eq ? UFormula::eq( args[0], args[1] )
                                                             : UFormula::app( rl.rel, std::move( args ) );
                parts.push_back( rl.positive ? atom : UFormula::negate( atom ) );
            }
            for ( const auto& u : r.uguards )
                for ( const auto& mm : logic::sort_matching_maps( u.vars, vars, false ) )
                {
                    std::vector<VarId> ren( n + u.vars.size() );
                    for ( VarId v = 0; v < n; ++v )
                        ren[v] = v;
                    for ( std::size_t k2 = 0; k2 < u.vars.size(); ++k2 )
                        ren[n + k2] = mm[k2];
                    parts.push_back( UFormula::lift( logic::rename( u.matrix, ren ) ) );
                }
            auto f = logic::reduce_updates( s.sig, vars, UFormula::conj( std::move( parts ) ) );
            for ( auto& lits : logic::dnf( logic::nnf( f ) ) )
            {
                Cube cube{ vars, std::move( lits ) };
                if ( normalize_cube( s.sig, cube ) )
                    out.push_back( std::move( cube ) );
            }
            return;
        }
        for ( std::size_t v = 0; v < r.vars.size(); ++v )
        {
            if ( used[v] || r.vars[v] != c.vars[k] )
                continue;
            used[v] = true;
            map[k] = static_cast<VarId>( v );
            rec( k + 1, used );
            used[v] = false;
        }
        map[k] = static_cast<VarId>( vars.size() );
        vars.push_back( c.vars[k] );
        rec( k + 1, used );
        vars.pop_back();
    };
    std::vector<bool> used( r.vars.size(), false );
    rec( 0, used );
    return out;
}

bool intersects_init( const encoder::AbPmas& s, const Cube& c )
{
    auto init = [&]( const Term& t ) {
        if ( t.kind == Term::Kind::Global )
            return Term::constant( s.init_of_global( t.id ) );
        if ( t.kind == Term::Kind::Read )
            return Term::constant( s.init_of_array( t.id ) );
        return t;
    };
    logic::CongruenceClosure cc;
    for ( const auto& l : c.lits )
    {
        Literal g = l;
        for ( auto& a : g.args )
            a = init( a );
        if ( auto d = decided( g ) )
        {
            if ( !*d )
                return false;
            continue;
        }
        if ( !cc.assert_literal( g ) )
            return false;
    }
    return true;
}

bool embeds( const Cube& general, const Cube& specific )
{
    if ( general.lits.size() > specific.lits.size() )
        return false;
    std::vector<VarId> map( general.vars.size() );
    std::vector<bool> used( specific.vars.size(), false );
    std::function<bool( std::size_t )> rec = [&]( std::size_t k ) -> bool {
        if ( k == general.vars.size() )
        {
            for ( const auto& l : general.lits )
            {
                auto m = logic::rename( l, map );
                orient( m );
                if ( !std::binary_search( specific.lits.begin(), specific.lits.end(), m ) )
                    return false;
            }
            return true;
        }
        for ( std::size_t v = 0; v < specific.vars.size(); ++v )
        {
            if ( used[v] || specific.vars[v] != general.vars[k] )
                continue;
            used[v] = true;
            map[k] = static_cast<VarId>( v );
            const bool ok = rec( k + 1 );
            used[v] = false;
            if ( ok )
                return true;
        }
        return false;
    };
    return rec( 0 );
}

} // namespace parasafe::engine
