#include "parasafe/logic/printer.hpp"

namespace parasafe::logic
{

namespace
{

std::string var_name( VarId v ) { return v == kBoundVar ? std::string{ "j" } : "z" + std::to_string( v + 1 ); }

} // namespace

std::string to_string( const Signature& sig, const Term& t )
{
    switch ( t.kind )
    {
    case Term::Kind::Var:
        return var_name( t.id );
    case Term::Kind::Const:
        return sig.constant_name( t.id );
    case Term::Kind::Global:
        return sig.global( t.id ).name;
    case Term::Kind::Read:
        return sig.array( t.id ).name + "[" + var_name( t.index ) + "]";
    }
    return {};
}

std::string to_string( const Signature& sig, const Literal& l )
{
    std::string s;
    if ( l.kind == Literal::Kind::Eq )
        s = to_string( sig, l.args[0] ) + ( l.positive ? " = " : " != " ) + to_string( sig, l.args[1] );
    else
    {
        s = l.positive ? "" : "not ";
        s += sig.relation( l.rel ).name + "(";
        for ( std::size_t i = 0; i < l.args.size(); ++i )
            s += ( i ? ", " : "" ) + to_string( sig, l.args[i] );
        s += ")";
    }
    return s;
}

std::string to_string( const Signature& sig, const Cube& c )
{
    std::string s;
    if ( !c.vars.empty() )
    {
        s = "exists";
        for ( std::size_t v = 0; v < c.vars.size(); ++v )
            s += " " + var_name( static_cast<VarId>( v ) ) + ":" + sig.sort( c.vars[v] ).name;
        s += ". ";
    }
    if ( c.lits.empty() )
        return s + "true";
    for ( std::size_t i = 0; i < c.lits.size(); ++i )
        s += ( i ? " and " : "" ) + to_string( sig, c.lits[i] );
    return s;
}

std::string to_string( const Signature& sig, const StateFormula& f )
{
    if ( f.cubes.empty() )
        return "false";
    std::string s;
    for ( std::size_t i = 0; i < f.cubes.size(); ++i )
        s += ( i ? " or " : "" ) + ( "(" + to_string( sig, f.cubes[i] ) + ")" );
    return s;
}

std::string to_string( const Signature& sig, const Formula& f )
{
    switch ( f.kind )
    {
    case Formula::Kind::True:
        return "true";
    case Formula::Kind::False:
        return "false";
    case Formula::Kind::Lit:
        return to_string( sig, f.lit );
    case Formula::Kind::Not:
        return "not (" + to_string( sig, f.kids.front() ) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or:
    {
        std::string s = "(";
        for ( std::size_t i = 0; i < f.kids.size(); ++i )
        {
            if ( i )
                s += f.kind == Formula::Kind::And ? " and " : " or ";
            s += to_string( sig, f.kids[i] );
        }
        return s + ")";
    }
    }
    return {};
}

} // namespace parasafe::logic
