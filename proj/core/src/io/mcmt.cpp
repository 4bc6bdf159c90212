#include "parasafe/io/mcmt.hpp"

#include "parasafe/logic/errors.hpp"
#include "parasafe/model/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace parasafe::io
{

using logic::Formula;
using logic::Literal;
using logic::Term;

namespace
{

class Printer
{
public:
    Printer( const logic::Signature& sig, std::vector<std::string> vars ) : _sig( sig ), _vars( std::move( vars ) ) {}

    [[nodiscard]] std::string var( logic::VarId v ) const
    {
        if ( v == logic::kBoundVar )
            return "j";
        if ( v >= _vars.size() )
            throw logic::EncodingError( "index variable out of range for MCMT output" );
        return _vars[v];
    }

    [[nodiscard]] std::string term( const Term& t ) const
    {
        switch ( t.kind )
        {
        case Term::Kind::Var:
            return var( t.id );
        case Term::Kind::Const:
            return _sig.constant_name( t.id );
        case Term::Kind::Global:
            return _sig.global( t.id ).name;
        case Term::Kind::Read:
            return _sig.array( t.id ).name + "[" + var( t.index ) + "]";
        }
        return {};
    }

    [[nodiscard]] std::string literal( const Literal& l ) const
    {
        std::string atom;
        if ( l.kind == Literal::Kind::Eq )
            atom = "(= " + term( l.args[0] ) + " " + term( l.args[1] ) + ")";
        else
        {
            atom = "(" + _sig.relation( l.rel ).name;
            for ( const auto& a : l.args )
                atom += " " + term( a );
            atom += ")";
        }
        return l.positive ? atom : "(not " + atom + ")";
    }

    [[nodiscard]] std::string formula( const Formula& f ) const
    {
        switch ( f.kind )
        {
        case Formula::Kind::True:
            return "true";
        case Formula::Kind::False:
            return "false";
        case Formula::Kind::Lit:
            return literal( f.lit );
        case Formula::Kind::Not:
            return "(not " + formula( f.kids.front() ) + ")";
        case Formula::Kind::And:
        case Formula::Kind::Or:
        {
            std::string s = f.kind == Formula::Kind::And ? "(and" : "(or";
            for ( const auto& k : f.kids )
                s += " " + formula( k );
            return s + ")";
        }
        }
        return {};
    }

private:
    const logic::Signature& _sig;
    std::vector<std::string> _vars;
};

void check_identifier( const std::string& name )
{
    static const char* reserved[] = { "j", "x", "y", "z1", "z2", "z3", "z4", "and", "or", "not", "true", "false", "bool" };
    for ( const char* r : reserved )
        if ( name == r )
            throw logic::EncodingError( "identifier '" + name + "' clashes with MCMT syntax" );
}

void transition( std::ostream& out, const encoder::AbPmas& s, const encoder::TransitionRule& r )
{
    const auto& sig = s.sig;
    if ( r.vars.size() > 2 )
        throw logic::EncodingError( "rule '" + r.label + "' needs " + std::to_string( r.vars.size() )
                                    + " index variables; MCMT output supports two" );
    Printer p( sig, { "x", "y" } );

    out << ":comment " << r.label << "\n";
    out << ":transition\n:var j\n";
    for ( std::size_t v = 0; v < r.vars.size(); ++v )
        out << ":var " << p.var( static_cast<logic::VarId>( v ) ) << "\n";
    out << ":guard";
    for ( const auto& l : r.guard )
        out << " " << p.literal( l );
    out << "\n";
    for ( const auto& u : r.uguards )
    {
        if ( u.vars.size() > 1 )
            throw logic::EncodingError( "rule '" + r.label + "' has a universal guard over "
                                        + std::to_string( u.vars.size() ) + " variables; MCMT output supports one" );
        // the universal variable is the case index j
        std::vector<std::string> names{ "x", "y" };
        names.resize( r.vars.size() );
        names.push_back( "j" );
        out << ":uguard " << Printer( sig, names ).formula( u.matrix ) << "\n";
    }

    auto global_value = [&]( logic::GlobalId g ) {
        for ( const auto& [lhs, rhs] : r.assigns )
            if ( lhs.kind == Term::Kind::Global && lhs.id == g )
                return p.term( rhs );
        return sig.global( g ).name;
    };
    auto globals = [&]() {
        for ( logic::GlobalId g = 0; g < sig.global_count(); ++g )
            out << ":val " << global_value( g ) << "\n";
    };

    if ( !r.bulk.empty() )
    {
        std::vector<const Formula*> guards;
        for ( const auto& b : r.bulk )
            for ( const auto& g : b.guards )
                if ( std::none_of( guards.begin(), guards.end(), [&]( const Formula* h ) { return *h == g; } ) )
                    guards.push_back( &g );
        auto array_value = [&]( logic::ArrayId a, const Formula* guard ) {
            for ( const auto& b : r.bulk )
            {
                if ( b.array != a )
                    continue;
                for ( std::size_t i = 0; guard && i < b.guards.size(); ++i )
                    if ( b.guards[i] == *guard )
                        return p.term( b.values[i] );
                return p.term( b.otherwise );
            }
            return sig.array( a ).name + "[j]";
        };
        out << ":numcases " << guards.size() + 1 << "\n";
        for ( std::size_t c = 0; c <= guards.size(); ++c )
        {
            const Formula* g = c < guards.size() ? guards[c] : nullptr;
            out << ":case";
            if ( g )
                out << " " << p.formula( *g );
            out << "\n";
            for ( logic::ArrayId a = 0; a < sig.array_count(); ++a )
                out << ":val " << array_value( a, g ) << "\n";
            globals();
        }
        return;
    }

    const bool point = std::any_of( r.assigns.begin(), r.assigns.end(),
                                    []( const auto& as ) { return as.first.kind == Term::Kind::Read; } );
    auto arrays = [&]( bool at_self ) {
        for ( logic::ArrayId a = 0; a < sig.array_count(); ++a )
        {
            std::string v = sig.array( a ).name + "[j]";
            if ( at_self )
                for ( const auto& [lhs, rhs] : r.assigns )
                    if ( lhs.kind == Term::Kind::Read && lhs.id == a )
                    {
                        if ( lhs.index != 0 )
                            throw logic::EncodingError( "rule '" + r.label + "' updates a cell other than x" );
                        v = p.term( rhs );
                    }
            out << ":val " << v << "\n";
        }
    };
    if ( point )
    {
        out << ":numcases 2\n:case (= x j)\n";
        arrays( true );
        globals();
        out << ":case\n";
        arrays( false );
        globals();
    }
    else
    {
        out << ":numcases 1\n:case\n";
        arrays( false );
        globals();
    }
}

} // namespace

std::string emit_mcmt( const encoder::AbPmas& s, const logic::StateFormula& goal )
{
    const auto& sig = s.sig;
    if ( goal.cubes.empty() )
        throw logic::EncodingError( "goal is unsatisfiable; an MCMT file needs at least one :u_cnj" );

    std::ostringstream out;
    for ( logic::SortId so = 0; so < sig.sort_count(); ++so )
        if ( sig.sort( so ).kind != logic::SortKind::Index )
        {
            check_identifier( sig.sort( so ).name );
            out << ":smt (define-type " << sig.sort( so ).name << ")\n";
        }
    for ( logic::RelId r = 0; r < sig.relation_count(); ++r )
    {
        const auto& rel = sig.relation( r );
        check_identifier( rel.name );
        out << ":smt (define " << rel.name << " ::(->";
        for ( auto a : rel.args )
            out << " " << sig.sort( a ).name;
        out << " bool))\n";
    }
    for ( logic::SortId so = 0; so < sig.sort_count(); ++so )
        for ( auto c : sig.sort( so ).constants )
        {
            check_identifier( sig.constant_name( c ) );
            out << ":smt (define " << sig.constant_name( c ) << " ::" << sig.sort( so ).name << ")\n";
        }
    for ( logic::ArrayId a = 0; a < sig.array_count(); ++a )
    {
        check_identifier( sig.array( a ).name );
        out << ":local " << sig.array( a ).name << " " << sig.sort( sig.array( a ).element ).name << "\n";
    }
    for ( logic::GlobalId g = 0; g < sig.global_count(); ++g )
    {
        check_identifier( sig.global( g ).name );
        out << ":global " << sig.global( g ).name << " " << sig.sort( sig.global( g ).sort ).name << "\n";
    }

    out << ":initial\n:var x\n:cnj";
    for ( logic::ArrayId a = 0; a < sig.array_count(); ++a )
        out << " (= " << sig.array( a ).name << "[x] " << sig.constant_name( s.init_of_array( a ) ) << ")";
    for ( logic::GlobalId g = 0; g < sig.global_count(); ++g )
        out << " (= " << sig.global( g ).name << " " << sig.constant_name( s.init_of_global( g ) ) << ")";
    out << "\n";

    for ( const auto& c : goal.cubes )
    {
        std::vector<std::string> names;
        for ( std::size_t v = 0; v < c.vars.size(); ++v )
            names.push_back( "z" + std::to_string( v + 1 ) );
        Printer p( sig, names );
        out << ":u_cnj";
        for ( const auto& l : c.lits )
            out << " " << p.literal( l );
        if ( c.lits.empty() )
            out << " true";
        out << "\n";
    }

    for ( const auto& r : s.rules )
    {
        out << "\n";
        transition( out, s, r );
    }
    return out.str();
}

std::vector<WitnessToken> parse_mcmt_witness( const std::string& text )
{
    std::vector<WitnessToken> out;
    std::size_t i = 0;
    auto fail = [&]( const std::string& msg ) {
        throw model::ParseError( { { { 1, static_cast<int>( i ) + 1 }, msg } } );
    };
    auto digits = [&]() {
        if ( i >= text.size() || !std::isdigit( static_cast<unsigned char>( text[i] ) ) )
            fail( "expected a digit" );
        long v = 0;
        while ( i < text.size() && std::isdigit( static_cast<unsigned char>( text[i] ) ) )
        {
            v = v * 10 + ( text[i++] - '0' );
            if ( v > 1000000000 )
                fail( "transition number too large" );
        }
        return static_cast<int>( v );
    };
    while ( true )
    {
        while ( i < text.size() && std::isspace( static_cast<unsigned char>( text[i] ) ) )
            ++i;
        if ( i == text.size() )
            break;
        if ( text[i] != '[' )
            fail( "expected '['" );
        ++i;
        if ( i >= text.size() || text[i] != 't' )
            fail( "expected 't'" );
        ++i;
        WitnessToken t;
        const auto start = i;
        t.ordinal = digits();
        if ( t.ordinal == 0 )
        {
            i = start;
            fail( "transition numbers start at 1" );
        }
        if ( i < text.size() && text[i] == '_' )
        {
            ++i;
            t.sub = digits();
        }
        if ( i >= text.size() || text[i] != ']' )
            fail( "expected ']'" );
        ++i;
        out.push_back( t );
    }
    return out;
}

std::string format_mcmt_witness( const std::vector<WitnessToken>& tokens )
{
    std::string s;
    for ( const auto& t : tokens )
    {
        s += "[t" + std::to_string( t.ordinal );
        if ( t.sub )
            s += "_" + std::to_string( *t.sub );
        s += "]";
    }
    return s;
}

std::vector<std::string> mcmt_transition_labels( const std::string& mcmt )
{
    std::vector<std::string> labels;
    std::istringstream in( mcmt );
    std::string line;
    std::string pending;
    while ( std::getline( in, line ) )
    {
        if ( line.rfind( ":comment ", 0 ) == 0 )
            pending = line.substr( 9 );
        else if ( line.rfind( ":transition", 0 ) == 0 )
        {
            labels.push_back( pending );
            pending.clear();
        }
    }
    return labels;
}

} // namespace parasafe::io
