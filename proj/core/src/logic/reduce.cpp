#include "parasafe/logic/reduce.hpp"

#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/solver.hpp"

#include <algorithm>

namespace parasafe::logic
{

UExpr UExpr::plain( Term t )
{
    UExpr e;
    e.term = t;
    return e;
}

UExpr UExpr::cases( std::vector<UFormula> guards, std::vector<UExpr> values, bool has_default )
{
    if ( values.size() != guards.size() + ( has_default ? 1 : 0 ) )
        throw EncodingError( "case expression with mismatched guards and values" );
    UExpr e;
    e.kind = Kind::Case;
    e.guards = std::move( guards );
    e.values = std::move( values );
    e.has_default = has_default;
    return e;
}

UExpr UExpr::apply( UExpr body, Term arg )
{
    UExpr e;
    e.kind = Kind::Apply;
    e.term = arg;
    e.values.push_back( std::move( body ) );
    return e;
}

UFormula UFormula::eq( UExpr a, UExpr b )
{
    UFormula f;
    f.kind = Kind::Eq;
    f.args.push_back( std::move( a ) );
    f.args.push_back( std::move( b ) );
    return f;
}

UFormula UFormula::app( RelId r, std::vector<UExpr> args )
{
    UFormula f;
    f.kind = Kind::Rel;
    f.rel = r;
    f.args = std::move( args );
    return f;
}

UFormula UFormula::lift( const Literal& l )
{
    std::vector<UExpr> args;
    for ( const auto& t : l.args )
        args.push_back( UExpr::plain( t ) );
    UFormula atom = l.kind == Literal::Kind::Eq ? eq( std::move( args[0] ), std::move( args[1] ) )
                                                : app( l.rel, std::move( args ) );
    return l.positive ? atom : negate( std::move( atom ) );
}

UFormula UFormula::lift( const Formula& f )
{
    UFormula r;
    switch ( f.kind )
    {
    case Formula::Kind::True:
        return r;
    case Formula::Kind::False:
        r.kind = Kind::False;
        return r;
    case Formula::Kind::Lit:
        return lift( f.lit );
    case Formula::Kind::Not:
        r.kind = Kind::Not;
        break;
    case Formula::Kind::And:
        r.kind = Kind::And;
        break;
    case Formula::Kind::Or:
        r.kind = Kind::Or;
        break;
    }
    for ( const auto& k : f.kids )
        r.kids.push_back( lift( k ) );
    return r;
}

UFormula UFormula::negate( UFormula f )
{
    UFormula r;
    r.kind = Kind::Not;
    r.kids.push_back( std::move( f ) );
    return r;
}

UFormula UFormula::conj( std::vector<UFormula> fs )
{
    UFormula r;
    r.kind = Kind::And;
    r.kids = std::move( fs );
    return r;
}

UFormula UFormula::disj( std::vector<UFormula> fs )
{
    UFormula r;
    r.kind = Kind::Or;
    r.kids = std::move( fs );
    return r;
}

namespace
{

Term bind( Term t, VarId arg )
{
    if ( t.kind == Term::Kind::Var && t.id == kBoundVar )
        t.id = arg;
    else if ( t.kind == Term::Kind::Read && t.index == kBoundVar )
        t.index = arg;
    return t;
}

} // namespace

UExpr instantiate_bound( const UExpr& e, VarId arg )
{
    UExpr r;
    r.kind = e.kind;
    r.has_default = e.has_default;
    if ( e.kind == UExpr::Kind::Apply )
    {
        // the inner lambda rebinds the variable; only its argument is free
        r.term = bind( e.term, arg );
        r.values = e.values;
        return r;
    }
    r.term = bind( e.term, arg );
    for ( const auto& g : e.guards )
        r.guards.push_back( instantiate_bound( g, arg ) );
    for ( const auto& v : e.values )
        r.values.push_back( instantiate_bound( v, arg ) );
    return r;
}

UFormula instantiate_bound( const UFormula& f, VarId arg )
{
    UFormula r;
    r.kind = f.kind;
    r.rel = f.rel;
    for ( const auto& a : f.args )
        r.args.push_back( instantiate_bound( a, arg ) );
    for ( const auto& k : f.kids )
        r.kids.push_back( instantiate_bound( k, arg ) );
    return r;
}

namespace
{

UFormula beta_formula( const UFormula& f );

} // namespace

UExpr beta( const UExpr& e )
{
    switch ( e.kind )
    {
    case UExpr::Kind::Plain:
        return e;
    case UExpr::Kind::Apply:
    {
        if ( !e.term.is_var() )
            throw EncodingError( "lambda applied to a non-variable index term" );
        return beta( instantiate_bound( e.values.front(), e.term.id ) );
    }
    case UExpr::Kind::Case:
    {
        UExpr r;
        r.kind = UExpr::Kind::Case;
        r.has_default = e.has_default;
        for ( const auto& g : e.guards )
            r.guards.push_back( beta_formula( g ) );
        for ( const auto& v : e.values )
            r.values.push_back( beta( v ) );
        return r;
    }
    }
    return e;
}

namespace
{

UFormula beta_formula( const UFormula& f )
{
    UFormula r;
    r.kind = f.kind;
    r.rel = f.rel;
    for ( const auto& a : f.args )
        r.args.push_back( beta( a ) );
    for ( const auto& k : f.kids )
        r.kids.push_back( beta_formula( k ) );
    return r;
}

class Reducer
{
public:
    Reducer( const Signature& sig, const std::vector<SortId>& var_sorts ) : _sig( sig ), _vars( var_sorts ) {}

    Formula formula( const UFormula& f )
    {
        using K = UFormula::Kind;
        switch ( f.kind )
        {
        case K::True:
            return Formula::top();
        case K::False:
            return Formula::bottom();
        case K::Not:
            return Formula::negate( formula( f.kids.front() ) );
        case K::And:
        case K::Or:
        {
            std::vector<Formula> kids;
            for ( const auto& k : f.kids )
                kids.push_back( formula( k ) );
            return f.kind == K::And ? Formula::conj( std::move( kids ) ) : Formula::disj( std::move( kids ) );
        }
        case K::Eq:
        case K::Rel:
            return atom( f );
        }
        return Formula::top();
    }

private:
    Formula atom( const UFormula& f )
    {
        for ( std::size_t i = 0; i < f.args.size(); ++i )
        {
            const auto& a = f.args[i];
            if ( a.kind == UExpr::Kind::Plain )
                continue;
            if ( a.kind == UExpr::Kind::Apply )
            {
                UFormula g = f;
                g.args[i] = beta( a );
                return atom( g );
            }
            std::vector<Formula> branches;
            std::vector<Formula> guards;
            for ( std::size_t k = 0; k < a.guards.size(); ++k )
            {
                guards.push_back( formula( a.guards[k] ) );
                UFormula g = f;
                g.args[i] = a.values[k];
                branches.push_back( Formula::conj( { guards.back(), atom( g ) } ) );
            }
            std::vector<Formula> negs;
            for ( const auto& g : guards )
                negs.push_back( Formula::negate( g ) );
            if ( a.has_default )
            {
                UFormula g = f;
                g.args[i] = a.values.back();
                negs.push_back( atom( g ) );
                branches.push_back( Formula::conj( std::move( negs ) ) );
            }
            else
            {
                EFFormula gap{ _vars, {}, Formula::conj( std::move( negs ) ) };
                if ( sat_exists_forall( _sig, gap ) )
                    throw EncodingError( "case partition is not exhaustive" );
            }
            return Formula::disj( std::move( branches ) );
        }
        std::vector<Term> args;
        for ( const auto& a : f.args )
            args.push_back( a.term );
        if ( f.kind == UFormula::Kind::Eq )
        {
            if ( args[0] == args[1] )
                return Formula::top();
            return Formula::literal( Literal::eq( args[0], args[1] ) );
        }
        return Formula::literal( Literal::app( f.rel, std::move( args ) ) );
    }

    const Signature& _sig;
    const std::vector<SortId>& _vars;
};

void dedupe( std::vector<Literal>& lits )
{
    std::sort( lits.begin(), lits.end() );
    lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );
}

bool complementary( const std::vector<Literal>& sorted )
{
    for ( const auto& l : sorted )
        if ( l.positive && std::binary_search( sorted.begin(), sorted.end(), l.negated() ) )
            return true;
    return false;
}

std::vector<std::vector<Literal>> dnf_rec( const Formula& f, std::size_t cap )
{
    using K = Formula::Kind;
    switch ( f.kind )
    {
    case K::True:
        return { {} };
    case K::False:
        return {};
    case K::Lit:
        return { { f.lit } };
    case K::Not:
        throw std::logic_error( "dnf expects negation normal form" );
    case K::Or:
    {
        std::vector<std::vector<Literal>> out;
        for ( const auto& k : f.kids )
        {
            auto part = dnf_rec( k, cap );
            for ( auto& c : part )
                out.push_back( std::move( c ) );
            if ( out.size() > cap )
                throw BudgetExceeded( "normal form exceeds " + std::to_string( cap ) + " cubes" );
        }
        return out;
    }
    case K::And:
    {
        std::vector<std::vector<Literal>> acc{ {} };
        for ( const auto& k : f.kids )
        {
            auto part = dnf_rec( k, cap );
            std::vector<std::vector<Literal>> next;
            for ( const auto& a : acc )
            {
                for ( const auto& b : part )
                {
                    auto c = a;
                    c.insert( c.end(), b.begin(), b.end() );
                    dedupe( c );
                    if ( complementary( c ) )
                        continue;
                    next.push_back( std::move( c ) );
                    if ( next.size() > cap )
                        throw BudgetExceeded( "normal form exceeds " + std::to_string( cap ) + " cubes" );
                }
            }
            acc = std::move( next );
            if ( acc.empty() )
                break;
        }
        return acc;
    }
    }
    return {};
}

} // namespace

Formula reduce_updates( const Signature& sig, const std::vector<SortId>& var_sorts, const UFormula& f )
{
    return Reducer( sig, var_sorts ).formula( f );
}

std::vector<std::vector<Literal>> dnf( const Formula& f, std::size_t cap )
{
    auto out = dnf_rec( nnf( f ), cap );
    for ( auto& c : out )
        dedupe( c );
    return out;
}

} // namespace parasafe::logic
