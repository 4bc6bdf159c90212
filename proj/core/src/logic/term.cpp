#include "parasafe/logic/term.hpp"

#include "parasafe/logic/errors.hpp"

namespace parasafe::logic
{

Formula Formula::negate( Formula f )
{
    switch ( f.kind )
    {
    case Kind::True:
        return bottom();
    case Kind::False:
        return top();
    case Kind::Not:
        return std::move( f.kids.front() );
    default:
        return { Kind::Not, {}, { std::move( f ) } };
    }
}

Formula Formula::conj( std::vector<Formula> fs )
{
    std::vector<Formula> out;
    for ( auto& f : fs )
    {
        if ( f.kind == Kind::True )
            continue;
        if ( f.kind == Kind::False )
            return bottom();
        if ( f.kind == Kind::And )
            for ( auto& k : f.kids )
                out.push_back( std::move( k ) );
        else
            out.push_back( std::move( f ) );
    }
    if ( out.empty() )
        return top();
    if ( out.size() == 1 )
        return std::move( out.front() );
    return { Kind::And, {}, std::move( out ) };
}

Formula Formula::disj( std::vector<Formula> fs )
{
    std::vector<Formula> out;
    for ( auto& f : fs )
    {
        if ( f.kind == Kind::False )
            continue;
        if ( f.kind == Kind::True )
            return top();
        if ( f.kind == Kind::Or )
            for ( auto& k : f.kids )
                out.push_back( std::move( k ) );
        else
            out.push_back( std::move( f ) );
    }
    if ( out.empty() )
        return bottom();
    if ( out.size() == 1 )
        return std::move( out.front() );
    return { Kind::Or, {}, std::move( out ) };
}

SortId term_sort( const Signature& sig, const std::vector<SortId>& var_sorts, const Term& t )
{
    switch ( t.kind )
    {
    case Term::Kind::Var:
        if ( t.id >= var_sorts.size() )
            throw IllTypedError( "unbound variable " + std::to_string( t.id ) );
        return var_sorts[t.id];
    case Term::Kind::Const:
        return sig.constant_sort( t.id );
    case Term::Kind::Global:
        return sig.global( t.id ).sort;
    case Term::Kind::Read:
    {
        const auto& a = sig.array( t.id );
        if ( t.index >= var_sorts.size() )
            throw IllTypedError( "unbound variable " + std::to_string( t.index ) );
        if ( var_sorts[t.index] != a.index )
            throw IllTypedError( "array '" + a.name + "' read at an index of the wrong sort" );
        return a.element;
    }
    }
    return 0;
}

void check_literal( const Signature& sig, const std::vector<SortId>& var_sorts, const Literal& l )
{
    if ( l.kind == Literal::Kind::Eq )
    {
        if ( l.args.size() != 2 )
            throw IllTypedError( "equality needs two sides" );
        const auto a = term_sort( sig, var_sorts, l.args[0] );
        const auto b = term_sort( sig, var_sorts, l.args[1] );
        if ( a != b )
            throw IllTypedError( "equality between sorts '" + sig.sort( a ).name + "' and '" + sig.sort( b ).name + "'" );
        return;
    }
    const auto& r = sig.relation( l.rel );
    if ( r.args.size() != l.args.size() )
        throw IllTypedError( "relation '" + r.name + "' applied with wrong arity" );
    for ( std::size_t i = 0; i < l.args.size(); ++i )
        if ( term_sort( sig, var_sorts, l.args[i] ) != r.args[i] )
            throw IllTypedError( "relation '" + r.name + "' argument " + std::to_string( i + 1 ) + " has the wrong sort" );
}

void check_formula( const Signature& sig, const std::vector<SortId>& var_sorts, const Formula& f )
{
    if ( f.kind == Formula::Kind::Lit )
        check_literal( sig, var_sorts, f.lit );
    for ( const auto& k : f.kids )
        check_formula( sig, var_sorts, k );
}

Term rename( const Term& t, const std::vector<VarId>& map )
{
    Term r = t;
    if ( t.kind == Term::Kind::Var && t.id != kBoundVar )
        r.id = map.at( t.id );
    else if ( t.kind == Term::Kind::Read && t.index != kBoundVar )
        r.index = map.at( t.index );
    return r;
}

Literal rename( const Literal& l, const std::vector<VarId>& map )
{
    Literal r = l;
    for ( auto& a : r.args )
        a = rename( a, map );
    return r;
}

Formula rename( const Formula& f, const std::vector<VarId>& map )
{
    Formula r;
    r.kind = f.kind;
    if ( f.kind == Formula::Kind::Lit )
        r.lit = rename( f.lit, map );
    r.kids.reserve( f.kids.size() );
    for ( const auto& k : f.kids )
        r.kids.push_back( rename( k, map ) );
    return r;
}

namespace
{

Formula nnf_impl( const Formula& f, bool neg )
{
    using K = Formula::Kind;
    switch ( f.kind )
    {
    case K::True:
        return neg ? Formula::bottom() : Formula::top();
    case K::False:
        return neg ? Formula::top() : Formula::bottom();
    case K::Lit:
        return Formula::literal( neg ? f.lit.negated() : f.lit );
    case K::Not:
        return nnf_impl( f.kids.front(), !neg );
    case K::And:
    case K::Or:
    {
        std::vector<Formula> kids;
        kids.reserve( f.kids.size() );
        for ( const auto& k : f.kids )
            kids.push_back( nnf_impl( k, neg ) );
        const bool is_and = ( f.kind == K::And ) != neg;
        return is_and ? Formula::conj( std::move( kids ) ) : Formula::disj( std::move( kids ) );
    }
    }
    return Formula::top();
}

} // namespace

Formula nnf( const Formula& f ) { return nnf_impl( f, false ); }

Formula cube_formula( const Cube& c )
{
    std::vector<Formula> kids;
    kids.reserve( c.lits.size() );
    for ( const auto& l : c.lits )
        kids.push_back( Formula::literal( l ) );
    return Formula::conj( std::move( kids ) );
}

bool is_index_literal( const Signature& sig, const std::vector<SortId>& var_sorts, const Literal& l )
{
    return l.kind == Literal::Kind::Eq && l.args[0].is_var() && l.args[0].id != kBoundVar
           && sig.sort( var_sorts.at( l.args[0].id ) ).kind == SortKind::Index;
}

} // namespace parasafe::logic
