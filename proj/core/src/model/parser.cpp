#include "parasafe/model/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace parasafe::model
{

std::string format_diagnostics( const std::vector<Diagnostic>& diags )
{
    std::string out;
    for ( const auto& d : diags )
    {
        if ( !out.empty() )
            out += "\n";
        out += std::to_string( d.pos.line ) + ":" + std::to_string( d.pos.column ) + ": " + d.message;
    }
    return out;
}

namespace
{

const std::set<std::string> kReserved{ "true", "false", "not", "and", "or", "self", "e" };

struct Token
{
    enum class Kind
    {
        Ident,
        Sym,
        End
    };
    Kind kind = Kind::End;
    std::string text;
    Position pos;
};

std::vector<Token> lex( std::string_view src )
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&]( std::size_t n ) {
        for ( std::size_t k = 0; k < n; ++k )
        {
            if ( src[i] == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
            ++i;
        }
    };
    while ( i < src.size() )
    {
        const char c = src[i];
        if ( c == '#' )
        {
            while ( i < src.size() && src[i] != '\n' )
                advance( 1 );
            continue;
        }
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            advance( 1 );
            continue;
        }
        const Position pos{ line, col };
        if ( std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' )
        {
            std::size_t j = i;
            while ( j < src.size() && ( std::isalnum( static_cast<unsigned char>( src[j] ) ) || src[j] == '_' ) )
                ++j;
            out.push_back( { Token::Kind::Ident, std::string( src.substr( i, j - i ) ), pos } );
            advance( j - i );
            continue;
        }
        if ( ( c == '!' || c == ':' ) && i + 1 < src.size() && src[i + 1] == '=' )
        {
            out.push_back( { Token::Kind::Sym, std::string( src.substr( i, 2 ) ), pos } );
            advance( 2 );
            continue;
        }
        if ( std::string_view( "{}()[],:;=" ).find( c ) != std::string_view::npos )
        {
            out.push_back( { Token::Kind::Sym, std::string( 1, c ), pos } );
            advance( 1 );
            continue;
        }
        throw ParseError( { { pos, std::string( "unexpected character '" ) + c + "'" } } );
    }
    out.push_back( { Token::Kind::End, "", { line, col } } );
    return out;
}

struct RawTerm
{
    std::string name;
    bool indexed = false;
    std::string index;
    Position pos;
};

struct RawFormula
{
    enum class Kind
    {
        True,
        False,
        Eq,
        Neq,
        Rel,
        Not,
        And,
        Or
    };
    Kind kind = Kind::True;
    RawTerm l;
    RawTerm r;
    std::string rel;
    std::vector<RawTerm> args;
    std::vector<RawFormula> kids;
    Position pos;
};

struct RawAction
{
    std::string name;
    ActionKind kind = ActionKind::Local;
    bool initiator = false;
    std::optional<RawFormula> pre;
    std::vector<std::pair<RawTerm, RawTerm>> effects;
    Position pos;
};

struct RawVar
{
    std::string name;
    std::string sort;
    std::string init;
    Position pos;
    Position sort_pos;
    Position init_pos;
};

struct RawTemplate
{
    std::string name;
    bool env = false;
    std::vector<RawVar> vars;
    std::vector<RawAction> actions;
    Position pos;
};

struct RawNamed
{
    std::string name;
    Position pos;
};

struct RawDoc
{
    struct SortDecl
    {
        RawNamed name;
        std::vector<RawNamed> values;
    };
    struct RelDecl
    {
        RawNamed name;
        std::vector<RawNamed> sorts;
    };
    std::vector<SortDecl> sorts;
    std::vector<RelDecl> relations;
    std::vector<RawTemplate> templates;
    std::optional<std::pair<std::vector<RawNamed>, std::vector<RawNamed>>> alternation;
    Position alternation_pos;
    std::optional<RawFormula> goal;
};

class Parser
{
public:
    explicit Parser( std::vector<Token> toks ) : _toks( std::move( toks ) ) {}

    RawDoc document()
    {
        RawDoc doc;
        while ( !at_end() )
        {
            const auto& t = peek();
            if ( is_kw( "sort" ) )
                doc.sorts.push_back( sort_decl() );
            else if ( is_kw( "relation" ) )
                doc.relations.push_back( rel_decl() );
            else if ( is_kw( "template" ) )
                doc.templates.push_back( template_decl() );
            else if ( is_kw( "alternate" ) )
            {
                if ( doc.alternation )
                    fail( t.pos, "alternation declared twice" );
                doc.alternation_pos = t.pos;
                doc.alternation = alternation();
            }
            else if ( is_kw( "goal" ) )
            {
                if ( doc.goal )
                    fail( t.pos, "goal declared twice" );
                next();
                expect( ":" );
                doc.goal = formula();
                accept( ";" );
            }
            else
                fail( t.pos, "expected 'sort', 'relation', 'template', 'alternate' or 'goal', found '" + t.text + "'" );
        }
        return doc;
    }

    RawFormula standalone_formula()
    {
        auto f = formula();
        accept( ";" );
        if ( !at_end() )
            fail( peek().pos, "unexpected '" + peek().text + "' after formula" );
        return f;
    }

private:
    [[noreturn]] static void fail( Position pos, const std::string& msg ) { throw ParseError( { { pos, msg } } ); }

    [[nodiscard]] const Token& peek( std::size_t ahead = 0 ) const
    {
        return _toks[std::min( _pos + ahead, _toks.size() - 1 )];
    }
    [[nodiscard]] bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& next() { return _toks[std::min( _pos++, _toks.size() - 1 )]; }
    [[nodiscard]] bool is_kw( const char* kw, std::size_t ahead = 0 ) const
    {
        return peek( ahead ).kind == Token::Kind::Ident && peek( ahead ).text == kw;
    }
    [[nodiscard]] bool is_sym( const char* s, std::size_t ahead = 0 ) const
    {
        return peek( ahead ).kind == Token::Kind::Sym && peek( ahead ).text == s;
    }
    bool accept( const char* s )
    {
        if ( !is_sym( s ) )
            return false;
        next();
        return true;
    }
    void expect( const char* s )
    {
        if ( !accept( s ) )
            fail( peek().pos, std::string( "expected '" ) + s + "', found '" + describe( peek() ) + "'" );
    }
    static std::string describe( const Token& t ) { return t.kind == Token::Kind::End ? "end of input" : t.text; }
    RawNamed ident( const char* what )
    {
        if ( peek().kind != Token::Kind::Ident )
            fail( peek().pos, std::string( "expected " ) + what + ", found '" + describe( peek() ) + "'" );
        const auto& t = next();
        return { t.text, t.pos };
    }
    void expect_kw( const char* kw )
    {
        if ( !is_kw( kw ) )
            fail( peek().pos, std::string( "expected '" ) + kw + "', found '" + describe( peek() ) + "'" );
        next();
    }

    std::vector<RawNamed> name_list( const char* what )
    {
        std::vector<RawNamed> out;
        expect( "{" );
        if ( !accept( "}" ) )
        {
            do
                out.push_back( ident( what ) );
            while ( accept( "," ) );
            expect( "}" );
        }
        return out;
    }

    RawDoc::SortDecl sort_decl()
    {
        next();
        RawDoc::SortDecl d;
        d.name = ident( "sort name" );
        d.values = name_list( "constant" );
        accept( ";" );
        return d;
    }

    RawDoc::RelDecl rel_decl()
    {
        next();
        RawDoc::RelDecl d;
        d.name = ident( "relation name" );
        expect( "(" );
        if ( !accept( ")" ) )
        {
            do
                d.sorts.push_back( ident( "sort name" ) );
            while ( accept( "," ) );
            expect( ")" );
        }
        accept( ";" );
        return d;
    }

    std::pair<std::vector<RawNamed>, std::vector<RawNamed>> alternation()
    {
        next();
        auto first = name_list( "template name" );
        expect_kw( "vs" );
        auto second = name_list( "template name" );
        accept( ";" );
        return { std::move( first ), std::move( second ) };
    }

    RawTemplate template_decl()
    {
        const auto start = next().pos;
        RawTemplate t;
        auto n = ident( "template name" );
        t.name = n.name;
        t.pos = start;
        if ( is_kw( "env" ) )
        {
            next();
            t.env = true;
        }
        expect( "{" );
        while ( !accept( "}" ) )
        {
            if ( at_end() )
                fail( peek().pos, "unterminated template '" + t.name + "'" );
            if ( is_kw( "var" ) )
                t.vars.push_back( var_decl() );
            else if ( is_kw( "action" ) )
                t.actions.push_back( action_decl() );
            else
                fail( peek().pos, "expected 'var' or 'action', found '" + describe( peek() ) + "'" );
        }
        return t;
    }

    RawVar var_decl()
    {
        RawVar v;
        v.pos = next().pos;
        v.name = ident( "variable name" ).name;
        expect( ":" );
        auto s = ident( "sort name" );
        v.sort = s.name;
        v.sort_pos = s.pos;
        expect( "=" );
        auto i = ident( "initial value" );
        v.init = i.name;
        v.init_pos = i.pos;
        accept( ";" );
        return v;
    }

    RawAction action_decl()
    {
        RawAction a;
        a.pos = next().pos;
        a.name = ident( "action name" ).name;
        expect( ":" );
        if ( is_kw( "local" ) )
            a.kind = ActionKind::Local;
        else if ( is_kw( "sync" ) )
            a.kind = ActionKind::Sync;
        else if ( is_kw( "individual" ) )
            a.kind = ActionKind::Individual;
        else
            fail( peek().pos, "expected 'local', 'sync' or 'individual', found '" + describe( peek() ) + "'" );
        next();
        if ( is_kw( "initiator" ) )
        {
            next();
            a.initiator = true;
        }
        expect( "{" );
        while ( !accept( "}" ) )
        {
            if ( is_kw( "pre" ) )
            {
                if ( a.pre )
                    fail( peek().pos, "precondition given twice" );
                next();
                expect( ":" );
                a.pre = formula();
            }
            else if ( is_kw( "eff" ) )
            {
                next();
                expect( ":" );
                while ( peek().kind == Token::Kind::Ident )
                {
                    auto v = ident( "variable name" );
                    expect( ":=" );
                    auto c = ident( "constant" );
                    a.effects.push_back( { RawTerm{ v.name, false, "", v.pos }, RawTerm{ c.name, false, "", c.pos } } );
                    if ( !accept( "," ) )
                        break;
                }
            }
            else
                fail( peek().pos, "expected 'pre', 'eff' or '}', found '" + describe( peek() ) + "'" );
            accept( ";" );
        }
        return a;
    }

    RawFormula formula()
    {
        auto first = conjunction();
        if ( !is_kw( "or" ) )
            return first;
        RawFormula f;
        f.kind = RawFormula::Kind::Or;
        f.pos = first.pos;
        f.kids.push_back( std::move( first ) );
        while ( is_kw( "or" ) )
        {
            next();
            f.kids.push_back( conjunction() );
        }
        return f;
    }

    RawFormula conjunction()
    {
        auto first = unary();
        if ( !is_kw( "and" ) )
            return first;
        RawFormula f;
        f.kind = RawFormula::Kind::And;
        f.pos = first.pos;
        f.kids.push_back( std::move( first ) );
        while ( is_kw( "and" ) )
        {
            next();
            f.kids.push_back( unary() );
        }
        return f;
    }

    RawFormula unary()
    {
        RawFormula f;
        f.pos = peek().pos;
        if ( is_kw( "not" ) )
        {
            next();
            f.kind = RawFormula::Kind::Not;
            f.kids.push_back( unary() );
            return f;
        }
        if ( accept( "(" ) )
        {
            auto inner = formula();
            expect( ")" );
            return inner;
        }
        if ( is_kw( "true" ) || is_kw( "false" ) )
        {
            f.kind = next().text == "true" ? RawFormula::Kind::True : RawFormula::Kind::False;
            return f;
        }
        if ( peek().kind == Token::Kind::Ident && is_sym( "(", 1 ) )
        {
            f.kind = RawFormula::Kind::Rel;
            f.rel = next().text;
            next();
            if ( !accept( ")" ) )
            {
                do
                    f.args.push_back( term() );
                while ( accept( "," ) );
                expect( ")" );
            }
            return f;
        }
        f.l = term();
        if ( accept( "=" ) )
            f.kind = RawFormula::Kind::Eq;
        else if ( accept( "!=" ) )
            f.kind = RawFormula::Kind::Neq;
        else
            fail( peek().pos, "expected '=' or '!=', found '" + describe( peek() ) + "'" );
        f.r = term();
        return f;
    }

    RawTerm term()
    {
        RawTerm t;
        auto n = ident( "term" );
        t.name = n.name;
        t.pos = n.pos;
        if ( accept( "[" ) )
        {
            t.indexed = true;
            t.index = ident( "index" ).name;
            expect( "]" );
        }
        return t;
    }

    std::vector<Token> _toks;
    std::size_t _pos = 0;
};

class Resolver
{
public:
    Resolver( const Pmas& p, std::vector<Diagnostic>& diags ) : _p( p ), _diags( diags ) {}

    // owner: template whose action this precondition belongs to; -1 for goals.
    AgentFormula resolve( const RawFormula& raw, int owner )
    {
        _owner = owner;
        _out = AgentFormula{};
        _types.clear();
        _out.root = node( raw );
        _out.index_owner.assign( _out.index_names.size(), -1 );
        for ( std::size_t i = 0; i < _types.size(); ++i )
            if ( !_types[i].empty() )
                _out.index_owner[i] = *_types[i].begin();
        // index variables only compared with others inherit their type
        bool changed = true;
        while ( changed )
        {
            changed = false;
            for ( auto [a, b] : _links )
            {
                auto ta = owner_of( a );
                auto tb = owner_of( b );
                if ( ta >= 0 && tb < 0 && b.kind == IndexRef::Kind::Var )
                {
                    _out.index_owner[b.var] = ta;
                    changed = true;
                }
                if ( tb >= 0 && ta < 0 && a.kind == IndexRef::Kind::Var )
                {
                    _out.index_owner[a.var] = tb;
                    changed = true;
                }
            }
        }
        for ( std::size_t i = 0; i < _out.index_names.size(); ++i )
        {
            if ( _types[i].size() > 1 )
                error( _first_use[i], "index variable '" + _out.index_names[i] + "' reads variables of different templates" );
            else if ( _out.index_owner[i] < 0 )
                error( _first_use[i], "index variable '" + _out.index_names[i] + "' is not attached to any template variable" );
        }
        _links.clear();
        return _out;
    }

private:
    void error( Position pos, std::string msg ) { _diags.push_back( { pos, std::move( msg ) } ); }

    int owner_of( IndexRef r ) const
    {
        switch ( r.kind )
        {
        case IndexRef::Kind::Self:
            return _owner;
        case IndexRef::Kind::Env:
            return _p.env_template();
        case IndexRef::Kind::Var:
            return _out.index_owner[r.var];
        }
        return -1;
    }

    int index_var( const std::string& name, Position pos )
    {
        for ( std::size_t i = 0; i < _out.index_names.size(); ++i )
            if ( _out.index_names[i] == name )
                return static_cast<int>( i );
        _out.index_names.push_back( name );
        _types.emplace_back();
        _first_use.push_back( pos );
        return static_cast<int>( _out.index_names.size() - 1 );
    }

    IndexRef index_ref( const std::string& name, Position pos )
    {
        if ( name == "self" )
        {
            if ( _owner < 0 )
                error( pos, "'self' is not allowed in a goal" );
            return IndexRef::self();
        }
        if ( name == "e" )
            return IndexRef::env();
        if ( _p.find_constant( name ) || _p.find_var( name ) )
            error( pos, "'" + name + "' cannot be used as an index variable" );
        return IndexRef::variable( index_var( name, pos ) );
    }

    // Value term; nullopt when the bare name is not a constant (an index variable).
    std::optional<ATerm> value( const RawTerm& t, bool report )
    {
        if ( t.indexed )
        {
            auto v = _p.find_var( t.name );
            if ( !v )
            {
                error( t.pos, "unknown variable '" + t.name + "'" );
                return ATerm::constant( 0, 0 );
            }
            const auto owner = _p.vars[*v].owner;
            const auto env = _p.env_template();
            auto at = index_ref( t.index, t.pos );
            if ( at.kind == IndexRef::Kind::Env && owner != env )
                error( t.pos, "variable '" + t.name + "' does not belong to the environment" );
            if ( at.kind == IndexRef::Kind::Self && _owner >= 0 && owner != _owner )
                error( t.pos, "variable '" + t.name + "' read at self does not belong to template '"
                                  + _p.templates[_owner].name + "'" );
            if ( at.kind == IndexRef::Kind::Var )
            {
                if ( owner == env )
                    error( t.pos, "environment variable '" + t.name + "' must be read at e" );
                _types[at.var].insert( owner );
            }
            return ATerm::read( *v, at );
        }
        if ( auto c = _p.find_constant( t.name ) )
            return ATerm::constant( c->first, c->second );
        if ( report )
            error( t.pos, "unknown constant '" + t.name + "'" );
        return std::nullopt;
    }

    int sort_of( const ATerm& t ) const { return t.kind == ATerm::Kind::Read ? _p.vars[t.var].sort : t.sort; }

    FNode node( const RawFormula& raw )
    {
        using K = RawFormula::Kind;
        FNode out;
        switch ( raw.kind )
        {
        case K::True:
            out = FNode::top();
            break;
        case K::False:
            out = FNode::bottom();
            break;
        case K::Not:
            out = FNode::negate( node( raw.kids.front() ) );
            break;
        case K::And:
        case K::Or:
        {
            std::vector<FNode> kids;
            for ( const auto& k : raw.kids )
                kids.push_back( node( k ) );
            out = raw.kind == K::And ? FNode::conj( std::move( kids ) ) : FNode::disj( std::move( kids ) );
            break;
        }
        case K::Rel:
        {
            auto r = _p.find_relation( raw.rel );
            if ( !r )
            {
                error( raw.pos, "unknown relation '" + raw.rel + "'" );
                return FNode::top();
            }
            std::vector<ATerm> args;
            for ( const auto& a : raw.args )
                args.push_back( value( a, true ).value_or( ATerm::constant( 0, 0 ) ) );
            const auto& decl = _p.relations[*r];
            if ( args.size() != decl.sorts.size() )
                error( raw.pos, "relation '" + raw.rel + "' expects " + std::to_string( decl.sorts.size() ) + " arguments" );
            else
                for ( std::size_t i = 0; i < args.size(); ++i )
                    if ( sort_of( args[i] ) != decl.sorts[i] )
                        error( raw.args[i].pos, "argument " + std::to_string( i + 1 ) + " of '" + raw.rel
                                                    + "' should have sort '" + _p.sorts[decl.sorts[i]].name + "'" );
            out = FNode::app( *r, std::move( args ) );
            break;
        }
        case K::Eq:
        case K::Neq:
        {
            auto l = value( raw.l, false );
            auto r = value( raw.r, false );
            if ( !l && !r )
            {
                auto a = index_ref( raw.l.name, raw.l.pos );
                auto b = index_ref( raw.r.name, raw.r.pos );
                _links.emplace_back( a, b );
                out = FNode::idx_eq( a, b );
            }
            else if ( !l || !r )
            {
                const auto& bad = !l ? raw.l : raw.r;
                error( bad.pos, "unknown constant '" + bad.name + "'" );
                return FNode::top();
            }
            else
            {
                if ( sort_of( *l ) != sort_of( *r ) )
                    error( raw.pos, "comparison between sorts '" + _p.sorts[sort_of( *l )].name + "' and '"
                                        + _p.sorts[sort_of( *r )].name + "'" );
                out = FNode::eq( *l, *r );
            }
            if ( raw.kind == K::Neq )
                out = FNode::negate( std::move( out ) );
            break;
        }
        }
        out.pos = raw.pos;
        return out;
    }

    const Pmas& _p;
    std::vector<Diagnostic>& _diags;
    int _owner = -1;
    AgentFormula _out;
    std::vector<std::set<int>> _types;
    std::vector<Position> _first_use;
    std::vector<std::pair<IndexRef, IndexRef>> _links;
};

// True when the formula has a disjunction after pushing negations inward.
bool has_disjunction( const FNode& f, bool neg )
{
    switch ( f.kind )
    {
    case FNode::Kind::Not:
        return has_disjunction( f.kids.front(), !neg );
    case FNode::Kind::And:
    case FNode::Kind::Or:
    {
        if ( ( f.kind == FNode::Kind::Or ) != neg && f.kids.size() > 1 )
            return true;
        for ( const auto& k : f.kids )
            if ( has_disjunction( k, neg ) )
                return true;
        return false;
    }
    default:
        return false;
    }
}

void check_name( std::vector<Diagnostic>& diags, const std::string& name, Position pos, std::set<std::string>& seen )
{
    if ( kReserved.contains( name ) )
        diags.push_back( { pos, "'" + name + "' is a reserved word" } );
    else if ( !seen.insert( name ).second )
        diags.push_back( { pos, "duplicate name '" + name + "'" } );
}

Pmas build( const RawDoc& doc, std::vector<Diagnostic>& diags )
{
    Pmas p;
    std::set<std::string> symbols;
    for ( const auto& s : doc.sorts )
    {
        check_name( diags, s.name.name, s.name.pos, symbols );
        Sort sort{ s.name.name, {} };
        for ( const auto& v : s.values )
        {
            check_name( diags, v.name, v.pos, symbols );
            sort.values.push_back( v.name );
        }
        if ( sort.values.empty() )
            diags.push_back( { s.name.pos, "sort '" + s.name.name + "' has no values" } );
        p.sorts.push_back( std::move( sort ) );
    }
    for ( const auto& r : doc.relations )
    {
        check_name( diags, r.name.name, r.name.pos, symbols );
        Relation rel{ r.name.name, {} };
        for ( const auto& s : r.sorts )
        {
            auto id = p.find_sort( s.name );
            if ( !id )
                diags.push_back( { s.pos, "unknown sort '" + s.name + "'" } );
            rel.sorts.push_back( id.value_or( 0 ) );
        }
        if ( rel.sorts.empty() )
            diags.push_back( { r.name.pos, "relation '" + r.name.name + "' needs at least one argument" } );
        p.relations.push_back( std::move( rel ) );
    }
    for ( const auto& t : doc.templates )
    {
        check_name( diags, t.name, t.pos, symbols );
        Template tmpl;
        tmpl.name = t.name;
        tmpl.is_env = t.env;
        tmpl.pos = t.pos;
        const int owner = static_cast<int>( p.templates.size() );
        for ( const auto& v : t.vars )
        {
            // a clash between template variables is left to validation
            if ( !p.find_var( v.name ) )
                check_name( diags, v.name, v.pos, symbols );
            Variable var{ v.name, 0, 0, owner };
            if ( auto s = p.find_sort( v.sort ) )
            {
                var.sort = *s;
                const auto& vals = p.sorts[*s].values;
                auto it = std::find( vals.begin(), vals.end(), v.init );
                if ( it == vals.end() )
                    diags.push_back( { v.init_pos, "initial value '" + v.init + "' is not a constant of sort '" + v.sort + "'" } );
                else
                    var.init = static_cast<int>( it - vals.begin() );
            }
            else
                diags.push_back( { v.sort_pos, "unknown sort '" + v.sort + "'" } );
            tmpl.vars.push_back( static_cast<int>( p.vars.size() ) );
            p.vars.push_back( std::move( var ) );
        }
        p.templates.push_back( std::move( tmpl ) );
    }

    Resolver resolver( p, diags );
    for ( std::size_t t = 0; t < doc.templates.size(); ++t )
    {
        for ( const auto& ra : doc.templates[t].actions )
        {
            Action a;
            a.name = ra.name;
            a.kind = ra.kind;
            a.initiator = ra.initiator;
            a.pos = ra.pos;
            if ( ra.pre )
            {
                a.pre = resolver.resolve( *ra.pre, static_cast<int>( t ) );
                if ( has_disjunction( a.pre.root, false ) )
                    diags.push_back( { ra.pre->pos, "precondition of '" + ra.name
                                                        + "' contains a disjunction; split the action into one copy per disjunct" } );
            }
            for ( const auto& [v, c] : ra.effects )
            {
                auto var = p.find_var( v.name );
                if ( !var )
                {
                    diags.push_back( { v.pos, "unknown variable '" + v.name + "'" } );
                    continue;
                }
                if ( p.vars[*var].owner != static_cast<int>( t ) )
                {
                    diags.push_back( { v.pos, "effect of '" + ra.name + "' assigns '" + v.name + "' of another template" } );
                    continue;
                }
                auto k = p.find_constant( c.name );
                if ( !k )
                {
                    diags.push_back( { c.pos, "unknown constant '" + c.name + "'" } );
                    continue;
                }
                if ( k->first != p.vars[*var].sort )
                {
                    diags.push_back( { c.pos, "constant '" + c.name + "' does not belong to sort '"
                                                  + p.sorts[p.vars[*var].sort].name + "'" } );
                    continue;
                }
                a.effects.push_back( { *var, k->second } );
            }
            p.templates[t].actions.push_back( std::move( a ) );
        }
    }
    if ( doc.alternation )
    {
        Alternation alt;
        auto side = [&]( const std::vector<RawNamed>& names, std::vector<int>& out ) {
            for ( const auto& n : names )
            {
                if ( auto t = p.find_template( n.name ) )
                    out.push_back( *t );
                else
                    diags.push_back( { n.pos, "unknown template '" + n.name + "'" } );
            }
        };
        side( doc.alternation->first, alt.first );
        side( doc.alternation->second, alt.second );
        p.alternation = std::move( alt );
    }
    if ( doc.goal )
        p.goal = resolver.resolve( *doc.goal, -1 );
    return p;
}

} // namespace

std::vector<Diagnostic> validate_pmas( const Pmas& p )
{
    std::vector<Diagnostic> diags;
    auto add = [&]( Position pos, std::string msg ) { diags.push_back( { pos, std::move( msg ) } ); };

    int envs = 0;
    for ( const auto& t : p.templates )
        envs += t.is_env ? 1 : 0;
    if ( envs != 1 )
        add( {}, "exactly one environment template is required, found " + std::to_string( envs ) );

    std::set<std::string> names;
    for ( const auto& v : p.vars )
        if ( !names.insert( v.name ).second )
            add( p.templates[v.owner].pos, "template variables must be disjoint; '" + v.name + "' is declared twice" );

    std::map<std::string, ActionKind> kinds;
    std::map<std::string, int> local_owner;
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
    {
        const auto& tmpl = p.templates[t];
        if ( tmpl.actions.empty() && !tmpl.is_env )
            add( tmpl.pos, "template '" + tmpl.name + "' needs a non-empty, finite set of action symbols" );
        std::set<std::string> own;
        for ( const auto& a : tmpl.actions )
        {
            if ( !own.insert( a.name ).second )
                add( a.pos, "action '" + a.name + "' declared twice in template '" + tmpl.name + "'" );
            if ( a.name == "nop" )
                add( a.pos, "'nop' is the implicit idle action" );
            if ( a.kind == ActionKind::Local )
            {
                if ( a.initiator )
                    add( a.pos, "local action '" + a.name + "' cannot be an initiator" );
                auto [it, fresh] = local_owner.emplace( a.name, static_cast<int>( t ) );
                if ( !fresh && it->second != static_cast<int>( t ) )
                    add( a.pos, "local action '" + a.name + "' is declared by two templates" );
                if ( kinds.contains( a.name ) && kinds[a.name] != ActionKind::Local )
                    add( a.pos, "action '" + a.name + "' is both local and synchronising" );
                kinds.emplace( a.name, ActionKind::Local );
            }
            else
            {
                auto [it, fresh] = kinds.emplace( a.name, a.kind );
                if ( !fresh && it->second != a.kind )
                    add( a.pos, "action '" + a.name + "' is declared with different kinds" );
            }
            for ( const auto& e : a.effects )
                if ( p.vars[e.var].owner != static_cast<int>( t ) )
                    add( a.pos, "effect of '" + a.name + "' touches another template's variable" );
        }
    }

    const int env = p.env_template();
    if ( env >= 0 )
    {
        for ( const auto& name : p.sync_actions() )
        {
            const bool by_env = p.find_action( env, name ) != nullptr;
            int agents = 0;
            for ( std::size_t t = 0; t < p.templates.size(); ++t )
                if ( static_cast<int>( t ) != env && p.find_action( static_cast<int>( t ), name ) )
                    ++agents;
            if ( !by_env )
                add( {}, "synchronisation action '" + name + "' must also be declared by the environment" );
            if ( agents == 0 )
                add( {}, "synchronisation action '" + name + "' needs at least one agent template" );
            if ( p.alternation )
            {
                std::set<int> groups;
                for ( std::size_t t = 0; t < p.templates.size(); ++t )
                    if ( const auto* a = p.find_action( static_cast<int>( t ), name ); a && a->initiator )
                        groups.insert( p.turn_group( static_cast<int>( t ) ) );
                if ( groups.size() > 1 )
                    add( {}, "synchronisation action '" + name + "' has initiators in both turn groups" );
            }
        }
    }

    if ( p.alternation )
    {
        std::vector<int> seen( p.templates.size(), 0 );
        for ( int t : p.alternation->first )
            ++seen.at( t );
        for ( int t : p.alternation->second )
            ++seen.at( t );
        for ( std::size_t t = 0; t < p.templates.size(); ++t )
            if ( seen[t] != 1 )
                add( {}, "alternation must place template '" + p.templates[t].name + "' in exactly one group" );
        if ( p.alternation->first.empty() || p.alternation->second.empty() )
            add( {}, "alternation groups must be non-empty" );
    }
    return diags;
}

Pmas parse_pmas_unchecked( std::string_view text )
{
    Parser parser( lex( text ) );
    auto doc = parser.document();
    std::vector<Diagnostic> diags;
    auto p = build( doc, diags );
    if ( !diags.empty() )
        throw ParseError( std::move( diags ) );
    return p;
}

Pmas parse_pmas( std::string_view text )
{
    auto p = parse_pmas_unchecked( text );
    auto diags = validate_pmas( p );
    if ( !diags.empty() )
        throw ParseError( std::move( diags ) );
    return p;
}

AgentFormula parse_goal( const Pmas& p, std::string_view text )
{
    Parser parser( lex( text ) );
    auto raw = parser.standalone_formula();
    std::vector<Diagnostic> diags;
    Resolver resolver( p, diags );
    auto f = resolver.resolve( raw, -1 );
    if ( !diags.empty() )
        throw ParseError( std::move( diags ) );
    return f;
}

} // namespace parasafe::model
