#include "parasafe/model/eval.hpp"

#include "parasafe/model/parser.hpp"

#include <algorithm>
#include <sstream>

namespace parasafe::model
{

namespace
{

class Evaluator
{
public:
    Evaluator( const Pmas& p, const Snapshot& g, const RelInterpretation& interp, const AgentFormula& f,
               std::optional<AgentRef> self )
        : _p( p ), _g( g ), _interp( interp ), _f( f ), _self( self ), _env( p.env_template() ),
          _ground( f.index_names.size(), 0 )
    {
    }

    bool run() { return search( 0 ); }

private:
    bool search( std::size_t v )
    {
        if ( v == _ground.size() )
            return holds( _f.root );
        const int owner = _f.index_owner[v];
        if ( owner < 0 )
            return false;
        const auto n = static_cast<int>( _g.agents[owner].size() );
        for ( int i = 0; i < n; ++i )
        {
            _ground[v] = i;
            if ( search( v + 1 ) )
                return true;
        }
        return false;
    }

    [[nodiscard]] std::optional<AgentRef> agent( IndexRef r ) const
    {
        switch ( r.kind )
        {
        case IndexRef::Kind::Self:
            return _self;
        case IndexRef::Kind::Env:
            return AgentRef{ _env, 0 };
        case IndexRef::Kind::Var:
            return AgentRef{ _f.index_owner[r.var], _ground[r.var] };
        }
        return std::nullopt;
    }

    [[nodiscard]] std::optional<int> value( const ATerm& t ) const
    {
        if ( t.kind == ATerm::Kind::Const )
            return t.value;
        auto a = agent( t.at );
        if ( !a || a->tmpl != _p.vars[t.var].owner )
            return std::nullopt;
        return _g.agents[a->tmpl][a->index].vals[_p.slot( t.var )];
    }

    [[nodiscard]] bool holds( const FNode& f ) const
    {
        switch ( f.kind )
        {
        case FNode::Kind::True:
            return true;
        case FNode::Kind::False:
            return false;
        case FNode::Kind::Eq:
        {
            auto a = value( f.terms[0] );
            auto b = value( f.terms[1] );
            return a && b && *a == *b;
        }
        case FNode::Kind::Rel:
        {
            std::vector<int> args;
            for ( const auto& t : f.terms )
            {
                auto v = value( t );
                if ( !v )
                    return false;
                args.push_back( *v );
            }
            return _interp.holds( f.rel, args );
        }
        case FNode::Kind::IdxEq:
        {
            auto a = agent( f.a );
            auto b = agent( f.b );
            return a && b && a->tmpl == b->tmpl && a->index == b->index;
        }
        case FNode::Kind::Not:
            return !holds( f.kids.front() );
        case FNode::Kind::And:
            return std::all_of( f.kids.begin(), f.kids.end(), [&]( const FNode& k ) { return holds( k ); } );
        case FNode::Kind::Or:
            return std::any_of( f.kids.begin(), f.kids.end(), [&]( const FNode& k ) { return holds( k ); } );
        }
        return false;
    }

    const Pmas& _p;
    const Snapshot& _g;
    const RelInterpretation& _interp;
    const AgentFormula& _f;
    std::optional<AgentRef> _self;
    int _env;
    std::vector<int> _ground;
};

} // namespace

bool eval_agent_formula( const Pmas& p, const Snapshot& g, const RelInterpretation& interp, const AgentFormula& f,
                         std::optional<AgentRef> self )
{
    return Evaluator( p, g, interp, f, self ).run();
}

Snapshot initial_snapshot( const Pmas& p, const std::vector<int>& counts )
{
    Snapshot g;
    const int env = p.env_template();
    int next_id = 0;
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
    {
        const int n = static_cast<int>( t ) == env ? 1 : counts.at( t );
        std::vector<int> init;
        for ( int v : p.templates[t].vars )
            init.push_back( p.vars[v].init );
        std::vector<Agent> agents;
        for ( int i = 0; i < n; ++i )
            agents.push_back( { next_id++, init } );
        g.agents.push_back( std::move( agents ) );
    }
    return g;
}

RelInterpretation empty_interpretation( const Pmas& p )
{
    RelInterpretation r;
    r.tuples.resize( p.relations.size() );
    return r;
}

RelInterpretation parse_interpretation( const Pmas& p, const std::string& text )
{
    auto interp = empty_interpretation( p );
    std::vector<Diagnostic> diags;
    std::istringstream in( text );
    std::string line;
    int lineno = 0;
    while ( std::getline( in, line ) )
    {
        ++lineno;
        if ( auto hash = line.find( '#' ); hash != std::string::npos )
            line.erase( hash );
        std::string compact;
        for ( char c : line )
            if ( !std::isspace( static_cast<unsigned char>( c ) ) )
                compact += c;
        if ( compact.empty() )
            continue;
        const auto open = compact.find( '(' );
        if ( open == std::string::npos || compact.back() != ')' )
        {
            diags.push_back( { { lineno, 1 }, "expected R(c1, ..., cm)" } );
            continue;
        }
        const auto name = compact.substr( 0, open );
        auto rel = p.find_relation( name );
        if ( !rel )
        {
            diags.push_back( { { lineno, 1 }, "unknown relation '" + name + "'" } );
            continue;
        }
        std::vector<int> tuple;
        std::string body = compact.substr( open + 1, compact.size() - open - 2 );
        std::istringstream parts( body );
        std::string c;
        std::size_t i = 0;
        bool ok = true;
        while ( std::getline( parts, c, ',' ) )
        {
            auto k = p.find_constant( c );
            const auto& sorts = p.relations[*rel].sorts;
            if ( !k || i >= sorts.size() || k->first != sorts[i] )
            {
                diags.push_back( { { lineno, 1 }, "bad argument '" + c + "' for relation '" + name + "'" } );
                ok = false;
                break;
            }
            tuple.push_back( k->second );
            ++i;
        }
        if ( ok && tuple.size() != p.relations[*rel].sorts.size() )
        {
            diags.push_back( { { lineno, 1 }, "wrong arity for relation '" + name + "'" } );
            ok = false;
        }
        if ( ok )
            interp.tuples[*rel].push_back( std::move( tuple ) );
    }
    if ( !diags.empty() )
        throw ParseError( std::move( diags ) );
    for ( auto& ts : interp.tuples )
    {
        std::sort( ts.begin(), ts.end() );
        ts.erase( std::unique( ts.begin(), ts.end() ), ts.end() );
    }
    return interp;
}

namespace
{

std::string index_name( const AgentFormula& f, IndexRef r )
{
    switch ( r.kind )
    {
    case IndexRef::Kind::Self:
        return "self";
    case IndexRef::Kind::Env:
        return "e";
    case IndexRef::Kind::Var:
        return f.index_names[r.var];
    }
    return {};
}

std::string term_text( const Pmas& p, const AgentFormula& f, const ATerm& t )
{
    if ( t.kind == ATerm::Kind::Const )
        return p.sorts[t.sort].values[t.value];
    return p.vars[t.var].name + "[" + index_name( f, t.at ) + "]";
}

std::string node_text( const Pmas& p, const AgentFormula& f, const FNode& n, bool nested )
{
    switch ( n.kind )
    {
    case FNode::Kind::True:
        return "true";
    case FNode::Kind::False:
        return "false";
    case FNode::Kind::Eq:
        return term_text( p, f, n.terms[0] ) + " = " + term_text( p, f, n.terms[1] );
    case FNode::Kind::IdxEq:
        return index_name( f, n.a ) + " = " + index_name( f, n.b );
    case FNode::Kind::Rel:
    {
        std::string s = p.relations[n.rel].name + "(";
        for ( std::size_t i = 0; i < n.terms.size(); ++i )
            s += ( i ? ", " : "" ) + term_text( p, f, n.terms[i] );
        return s + ")";
    }
    case FNode::Kind::Not:
    {
        const auto& k = n.kids.front();
        if ( k.kind == FNode::Kind::Eq )
            return term_text( p, f, k.terms[0] ) + " != " + term_text( p, f, k.terms[1] );
        if ( k.kind == FNode::Kind::IdxEq )
            return index_name( f, k.a ) + " != " + index_name( f, k.b );
        return "not " + node_text( p, f, k, true );
    }
    case FNode::Kind::And:
    case FNode::Kind::Or:
    {
        std::string s;
        for ( std::size_t i = 0; i < n.kids.size(); ++i )
        {
            if ( i )
                s += n.kind == FNode::Kind::And ? " and " : " or ";
            s += node_text( p, f, n.kids[i], true );
        }
        return nested ? "(" + s + ")" : s;
    }
    }
    return {};
}

const char* kind_text( ActionKind k )
{
    switch ( k )
    {
    case ActionKind::Local:
        return "local";
    case ActionKind::Sync:
        return "sync";
    case ActionKind::Individual:
        return "individual";
    }
    return "local";
}

} // namespace

std::string print_formula( const Pmas& p, const AgentFormula& f ) { return node_text( p, f, f.root, false ); }

std::string print_pmas( const Pmas& p )
{
    std::ostringstream out;
    for ( const auto& s : p.sorts )
    {
        out << "sort " << s.name << " { ";
        for ( std::size_t i = 0; i < s.values.size(); ++i )
            out << ( i ? ", " : "" ) << s.values[i];
        out << " }\n";
    }
    for ( const auto& r : p.relations )
    {
        out << "relation " << r.name << "(";
        for ( std::size_t i = 0; i < r.sorts.size(); ++i )
            out << ( i ? ", " : "" ) << p.sorts[r.sorts[i]].name;
        out << ")\n";
    }
    for ( const auto& t : p.templates )
    {
        out << "\ntemplate " << t.name << ( t.is_env ? " env" : "" ) << " {\n";
        for ( int v : t.vars )
            out << "  var " << p.vars[v].name << ": " << p.sorts[p.vars[v].sort].name << " = "
                << p.sorts[p.vars[v].sort].values[p.vars[v].init] << "\n";
        for ( const auto& a : t.actions )
        {
            out << "  action " << a.name << " : " << kind_text( a.kind ) << ( a.initiator ? " initiator" : "" ) << " {\n";
            out << "    pre: " << print_formula( p, a.pre ) << ";\n";
            out << "    eff: ";
            for ( std::size_t i = 0; i < a.effects.size(); ++i )
            {
                const auto& e = a.effects[i];
                out << ( i ? ", " : "" ) << p.vars[e.var].name << " := " << p.sorts[p.vars[e.var].sort].values[e.value];
            }
            out << ";\n  }\n";
        }
        out << "}\n";
    }
    if ( p.alternation )
    {
        auto group = [&]( const std::vector<int>& ts ) {
            std::string s = "{ ";
            for ( std::size_t i = 0; i < ts.size(); ++i )
                s += ( i ? ", " : "" ) + p.templates[ts[i]].name;
            return s + " }";
        };
        out << "\nalternate " << group( p.alternation->first ) << " vs " << group( p.alternation->second ) << "\n";
    }
    if ( p.goal )
        out << "\ngoal: " << print_formula( p, *p.goal ) << "\n";
    return out.str();
}

} // namespace parasafe::model
