#include "parasafe/encoder/encoder.hpp"

#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/reduce.hpp"
#include "parasafe/logic/solver.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace parasafe::encoder
{

using logic::Formula;
using logic::Literal;
using logic::Term;

const char* to_string( StepKind k )
{
    switch ( k )
    {
    case StepKind::Declare:
        return "declare";
    case StepKind::LocalGate:
        return "local-gate";
    case StepKind::BulkLocal:
        return "bulk";
    case StepKind::Start:
        return "start";
    case StepKind::Join:
        return "join";
    case StepKind::SyncGate:
        return "sync-gate";
    case StepKind::Commit:
        return "commit";
    case StepKind::Individual:
        return "individual";
    }
    return "?";
}

ConstId AbPmas::init_of_global( GlobalId g ) const
{
    for ( auto [gg, c] : init_globals )
        if ( gg == g )
            return c;
    throw std::out_of_range( "global without initial value" );
}

ConstId AbPmas::init_of_array( ArrayId a ) const
{
    for ( auto [aa, c] : init_arrays )
        if ( aa == a )
            return c;
    throw std::out_of_range( "array without initial value" );
}

namespace
{

std::string upper( const std::string& s )
{
    std::string out = s;
    for ( auto& c : out )
        c = static_cast<char>( std::toupper( static_cast<unsigned char>( c ) ) );
    return out;
}

class FormulaTranslator
{
public:
    FormulaTranslator( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f, SelfBinding self, VarId first )
        : _s( s ), _p( p ), _f( f ), _self( self ), _first( first ), _env( p.env_template() )
    {
        for ( std::size_t i = 0; i < f.index_names.size(); ++i )
        {
            const int owner = f.index_owner[i];
            if ( owner < 0 )
                throw logic::EncodingError( "index variable '" + f.index_names[i] + "' has no template" );
            _vars.push_back( owner == _env ? SortId{ 0 } : s.templates[owner].index );
        }
    }

    Translation run()
    {
        Translation t;
        t.formula = node( _f.root );
        for ( std::size_t i = 0; i < _f.index_names.size(); ++i )
            if ( _f.index_owner[i] != _env )
                t.new_vars.push_back( _vars[i] );
        return t;
    }

private:
    // Formula variable i maps to a rule variable unless it denotes the environment.
    [[nodiscard]] std::optional<VarId> var_of( int i ) const
    {
        if ( _f.index_owner[i] == _env )
            return std::nullopt;
        VarId v = _first;
        for ( int k = 0; k < i; ++k )
            if ( _f.index_owner[k] != _env )
                ++v;
        return v;
    }

    struct IndexValue
    {
        bool env = false;
        VarId var = 0;
        SortId sort = 0;
    };

    [[nodiscard]] IndexValue index( model::IndexRef r ) const
    {
        switch ( r.kind )
        {
        case model::IndexRef::Kind::Env:
            return { true, 0, 0 };
        case model::IndexRef::Kind::Self:
            if ( _self.kind == SelfBinding::Kind::Env )
                return { true, 0, 0 };
            if ( _self.kind == SelfBinding::Kind::None )
                throw logic::EncodingError( "'self' has no binding here" );
            return { false, _self.var, 0 };
        case model::IndexRef::Kind::Var:
        {
            auto v = var_of( r.var );
            if ( !v )
                return { true, 0, 0 };
            return { false, *v, _vars[r.var] };
        }
        }
        return {};
    }

    [[nodiscard]] Term term( const model::ATerm& t ) const
    {
        if ( t.kind == model::ATerm::Kind::Const )
            return Term::constant( _s.values[t.sort][t.value] );
        const auto& var = _p.vars[t.var];
        const auto& sym = _s.templates[var.owner];
        const auto slot = _p.slot( t.var );
        const auto at = index( t.at );
        if ( sym.env )
            return Term::global( sym.globals[slot] );
        if ( at.env )
            throw logic::EncodingError( "variable '" + var.name + "' read at the environment" );
        return Term::read( sym.arrays[slot], at.var );
    }

    Formula node( const model::FNode& n ) const
    {
        using K = model::FNode::Kind;
        switch ( n.kind )
        {
        case K::True:
            return Formula::top();
        case K::False:
            return Formula::bottom();
        case K::Eq:
        {
            auto a = term( n.terms[0] );
            auto b = term( n.terms[1] );
            if ( a == b )
                return Formula::top();
            if ( a.is_const() && b.is_const() )
                return a == b ? Formula::top() : Formula::bottom();
            return Formula::literal( Literal::eq( a, b ) );
        }
        case K::Rel:
        {
            std::vector<Term> args;
            for ( const auto& t : n.terms )
                args.push_back( term( t ) );
            return Formula::literal( Literal::app( _s.relations[n.rel], std::move( args ) ) );
        }
        case K::IdxEq:
        {
            auto a = index( n.a );
            auto b = index( n.b );
            if ( a.env || b.env )
                return a.env && b.env ? Formula::top() : Formula::bottom();
            if ( a.var == b.var )
                return Formula::top();
            const auto sa = var_sort( a );
            const auto sb = var_sort( b );
            if ( sa && sb && *sa != *sb )
                return Formula::bottom();
            return Formula::literal( Literal::eq( Term::var( a.var ), Term::var( b.var ) ) );
        }
        case K::Not:
            return Formula::negate( node( n.kids.front() ) );
        case K::And:
        case K::Or:
        {
            std::vector<Formula> kids;
            for ( const auto& k : n.kids )
                kids.push_back( node( k ) );
            return n.kind == K::And ? Formula::conj( std::move( kids ) ) : Formula::disj( std::move( kids ) );
        }
        }
        return Formula::top();
    }

    [[nodiscard]] std::optional<SortId> var_sort( const IndexValue& v ) const
    {
        if ( v.var >= _first )
            return v.sort;
        if ( _self.kind == SelfBinding::Kind::Var && v.var == _self.var && _self_sort )
            return *_self_sort;
        return std::nullopt;
    }

public:
    void set_self_sort( SortId s ) { _self_sort = s; }

private:
    const AbPmas& _s;
    const model::Pmas& _p;
    const model::AgentFormula& _f;
    SelfBinding _self;
    VarId _first;
    int _env;
    std::vector<SortId> _vars;
    std::optional<SortId> _self_sort;
};

} // namespace

Translation translate_formula( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f, SelfBinding self,
                               VarId first_var )
{
    return FormulaTranslator( s, p, f, self, first_var ).run();
}

namespace
{

// Translation with the sort of self known, so cross-template comparisons fold.
Translation translate_with_self( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f, SelfBinding self,
                                 std::optional<SortId> self_sort, VarId first_var )
{
    FormulaTranslator tr( s, p, f, self, first_var );
    if ( self_sort )
        tr.set_self_sort( *self_sort );
    return tr.run();
}

CubeTranslation to_cube( Translation t )
{
    CubeTranslation out;
    out.new_vars = std::move( t.new_vars );
    auto cubes = logic::dnf( t.formula );
    if ( cubes.empty() )
    {
        out.unsat = true;
        return out;
    }
    if ( cubes.size() > 1 )
        throw logic::EncodingError( "precondition still contains a disjunction" );
    out.lits = std::move( cubes.front() );
    return out;
}

} // namespace

CubeTranslation translate_agent_formula( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f,
                                         SelfBinding self, VarId first_var )
{
    return to_cube( translate_formula( s, p, f, self, first_var ) );
}

AbPmas encode_signature( const model::Pmas& p, Semantics sem )
{
    AbPmas s;
    s.semantics = sem;
    auto& sig = s.sig;
    const int env = p.env_template();
    if ( env < 0 )
        throw logic::EncodingError( "model has no environment template" );

    for ( const auto& so : p.sorts )
    {
        const auto id = sig.add_sort( so.name, logic::SortKind::Element, so.values );
        s.element_sorts.push_back( id );
        s.values.push_back( sig.sort( id ).constants );
    }

    // one action sort shared by all templates
    std::vector<std::string> actions{ "Nop_Action" };
    for ( const auto& t : p.templates )
        for ( const auto& a : t.actions )
            if ( std::find( actions.begin(), actions.end(), a.name ) == actions.end() )
                actions.push_back( a.name );
    s.action_sort = sig.add_sort( "Action", logic::SortKind::Action, actions );
    for ( std::size_t i = 0; i < actions.size(); ++i )
        s.action_consts[actions[i]] = sig.sort( s.action_sort ).constants[i];
    s.nop = s.action_consts.at( "Nop_Action" );

    std::vector<std::string> phases{ "P0", "PL", "PS" };
    if ( sem == Semantics::Concurrent )
    {
        phases.push_back( "PL2" );
        phases.push_back( "PS2" );
    }
    s.phase_sort = sig.add_sort( "PhaseSort", logic::SortKind::Phase, phases );
    for ( std::size_t i = 0; i < phases.size(); ++i )
        s.phase_consts[phases[i]] = sig.sort( s.phase_sort ).constants[i];

    std::optional<SortId> turn_sort;
    if ( p.alternation )
    {
        auto label = [&]( const std::vector<int>& group ) { return "turn" + upper( p.templates[group.front()].name ); };
        turn_sort = sig.add_sort( "turnSort", logic::SortKind::Element,
                                  { label( p.alternation->first ), label( p.alternation->second ) } );
        s.turn_consts = sig.sort( *turn_sort ).constants;
    }

    for ( const auto& r : p.relations )
    {
        std::vector<SortId> args;
        for ( int so : r.sorts )
            args.push_back( s.element_sorts[so] );
        s.relations.push_back( sig.add_relation( r.name, std::move( args ) ) );
    }

    s.templates.resize( p.templates.size() );
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
    {
        if ( static_cast<int>( t ) == env )
            continue;
        auto& sym = s.templates[t];
        const auto& tm = p.templates[t];
        sym.index = sig.add_sort( "Id" + tm.name, logic::SortKind::Index );
    }
    // arrays first, in template then variable order, then the action array
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
    {
        if ( static_cast<int>( t ) == env )
            continue;
        auto& sym = s.templates[t];
        const auto& tm = p.templates[t];
        const auto suffix = upper( tm.name );
        for ( int v : tm.vars )
        {
            const auto& var = p.vars[v];
            const auto a = sig.add_array( var.name + suffix, sym.index, s.element_sorts[var.sort] );
            sym.arrays.push_back( a );
            s.init_arrays.emplace_back( a, s.values[var.sort][var.init] );
        }
        sym.act = sig.add_array( "act" + suffix, sym.index, s.action_sort );
        s.init_arrays.emplace_back( sym.act, s.nop );
    }
    auto& esym = s.templates[env];
    esym.env = true;
    for ( int v : p.templates[env].vars )
    {
        const auto& var = p.vars[v];
        const auto g = sig.add_global( var.name, s.element_sorts[var.sort] );
        esym.globals.push_back( g );
        s.init_globals.emplace_back( g, s.values[var.sort][var.init] );
    }
    s.env_act = sig.add_global( "actEnv", s.action_sort );
    s.init_globals.emplace_back( s.env_act, s.nop );
    s.phase = sig.add_global( "phase", s.phase_sort );
    s.init_globals.emplace_back( s.phase, s.phase_const( "P0" ) );
    if ( turn_sort )
    {
        s.turn = sig.add_global( "turn", *turn_sort );
        s.init_globals.emplace_back( *s.turn, s.turn_consts[0] );
    }
    return s;
}

namespace
{

class RuleBuilder
{
public:
    RuleBuilder( AbPmas& s, const model::Pmas& p ) : _s( s ), _p( p ), _env( p.env_template() ) {}

    void interleaved()
    {
        declares();
        bulks( "PL" );
        for ( const auto& a : _p.sync_actions() )
            sync( a );
    }

    void concurrent()
    {
        declares();
        local_gates();
        bulks( "PL2" );
        for ( const auto& a : _p.sync_actions() )
            sync( a );
    }

private:
    Literal phase_is( const char* ph ) const
    {
        return Literal::eq( Term::global( _s.phase ), Term::constant( _s.phase_const( ph ) ) );
    }
    std::pair<Term, Term> set_phase( const char* ph ) const
    {
        return { Term::global( _s.phase ), Term::constant( _s.phase_const( ph ) ) };
    }
    Term act_const( const std::string& a ) const { return Term::constant( _s.action_consts.at( a ) ); }

    void add_turn_guard( TransitionRule& r, int group ) const
    {
        if ( _s.turn )
            r.guard.push_back( Literal::eq( Term::global( *_s.turn ), Term::constant( _s.turn_consts[group] ) ) );
    }
    void add_turn_toggle( TransitionRule& r, int group ) const
    {
        if ( _s.turn )
            r.assigns.emplace_back( Term::global( *_s.turn ), Term::constant( _s.turn_consts[1 - group] ) );
    }

    // Appends a translated precondition; false when it folds to false.
    bool add_pre( TransitionRule& r, const model::AgentFormula& f, SelfBinding self, std::optional<SortId> self_sort ) const
    {
        auto tr = to_cube( translate_with_self( _s, _p, f, self, self_sort, static_cast<VarId>( r.vars.size() ) ) );
        if ( tr.unsat )
            return false;
        r.vars.insert( r.vars.end(), tr.new_vars.begin(), tr.new_vars.end() );
        r.guard.insert( r.guard.end(), tr.lits.begin(), tr.lits.end() );
        return true;
    }

    void env_effects( TransitionRule& r, const model::Action* a ) const
    {
        if ( !a )
            return;
        for ( const auto& e : a->effects )
            r.assigns.emplace_back( Term::global( _s.templates[_env].globals[_p.slot( e.var )] ),
                                    Term::constant( _s.values[_p.vars[e.var].sort][e.value] ) );
    }

    // One rule per equality pattern of the existentials, so rule variables are
    // differentiated; the all-distinct variant keeps the plain label.
    void push( const TransitionRule& r )
    {
        auto parts = logic::alldiff_partitions( r.vars );
        std::stable_partition( parts.begin(), parts.end(), []( const std::vector<VarId>& rep ) {
            for ( VarId v = 0; v < rep.size(); ++v )
                if ( rep[v] != v )
                    return false;
            return true;
        } );
        int variant = 0;
        for ( const auto& rep : parts )
        {
            std::size_t width = r.vars.size();
            for ( const auto& u : r.uguards )
                width = std::max( width, r.vars.size() + u.vars.size() );
            std::vector<VarId> map( width );
            TransitionRule d = r;
            d.vars.clear();
            for ( VarId v = 0; v < r.vars.size(); ++v )
            {
                if ( rep[v] == v )
                {
                    map[v] = static_cast<VarId>( d.vars.size() );
                    d.vars.push_back( r.vars[v] );
                }
                else
                    map[v] = map[rep[v]];
            }
            for ( std::size_t v = r.vars.size(); v < width; ++v )
                map[v] = static_cast<VarId>( v - r.vars.size() + d.vars.size() );

            bool dead = false;
            d.guard.clear();
            for ( const auto& l : r.guard )
            {
                auto m = logic::rename( l, map );
                if ( m.kind == Literal::Kind::Eq && m.args[0].is_var() && m.args[1].is_var() )
                {
                    if ( ( m.args[0] == m.args[1] ) != m.positive )
                        dead = true;
                    continue;
                }
                if ( m.kind == Literal::Kind::Eq && m.args[0] == m.args[1] )
                {
                    dead = dead || !m.positive;
                    continue;
                }
                if ( std::find( d.guard.begin(), d.guard.end(), m ) == d.guard.end() )
                    d.guard.push_back( std::move( m ) );
            }
            if ( dead )
                continue;
            for ( auto& u : d.uguards )
                u.matrix = logic::rename( u.matrix, map );
            for ( auto& [lhs, rhs] : d.assigns )
            {
                lhs = logic::rename( lhs, map );
                rhs = logic::rename( rhs, map );
            }
            if ( variant++ > 0 )
                d.label += "#" + std::to_string( variant );
            _s.rules.push_back( std::move( d ) );
        }
    }

    void declares()
    {
        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
        {
            const auto& tm = _p.templates[t];
            const int ti = static_cast<int>( t );
            for ( const auto& a : tm.actions )
            {
                if ( a.kind != model::ActionKind::Local )
                    continue;
                for ( const char* ph : { "P0", "PL" } )
                {
                    TransitionRule r;
                    r.kind = StepKind::Declare;
                    r.action = a.name;
                    r.tmpl = ti;
                    r.label = std::string( "declare-" ) + ph + ":" + a.name + "@" + tm.name;
                    r.guard.push_back( phase_is( ph ) );
                    add_turn_guard( r, _p.turn_group( ti ) );
                    if ( tm.is_env )
                    {
                        r.guard.push_back( Literal::eq( Term::global( _s.env_act ), Term::constant( _s.nop ) ) );
                        if ( !add_pre( r, a.pre, SelfBinding::env(), std::nullopt ) )
                            continue;
                        r.assigns.emplace_back( Term::global( _s.env_act ), act_const( a.name ) );
                    }
                    else
                    {
                        const auto& sym = _s.templates[t];
                        r.vars.push_back( sym.index );
                        r.has_self = true;
                        r.guard.push_back( Literal::eq( Term::read( sym.act, 0 ), Term::constant( _s.nop ) ) );
                        if ( !add_pre( r, a.pre, SelfBinding::at( 0 ), sym.index ) )
                            continue;
                        r.assigns.emplace_back( Term::read( sym.act, 0 ), act_const( a.name ) );
                    }
                    r.assigns.push_back( set_phase( "PL" ) );
                    push( std::move( r ) );
                }
            }
        }
    }

    // Per agent template, bulk updates applying every listed action's effect.
    void apply_effects( TransitionRule& r, const std::vector<std::string>& actions ) const
    {
        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
        {
            if ( static_cast<int>( t ) == _env )
                continue;
            const auto& tm = _p.templates[t];
            const auto& sym = _s.templates[t];
            for ( std::size_t slot = 0; slot < tm.vars.size(); ++slot )
            {
                const int var = tm.vars[slot];
                BulkUpdate b;
                b.array = sym.arrays[slot];
                b.otherwise = Term::read( b.array, logic::kBoundVar );
                for ( const auto& name : actions )
                {
                    const auto* a = _p.find_action( static_cast<int>( t ), name );
                    if ( !a )
                        continue;
                    for ( const auto& e : a->effects )
                    {
                        if ( e.var != var )
                            continue;
                        b.guards.push_back( Formula::literal(
                            Literal::eq( Term::read( sym.act, logic::kBoundVar ), act_const( name ) ) ) );
                        b.values.push_back( Term::constant( _s.values[_p.vars[var].sort][e.value] ) );
                    }
                }
                if ( !b.guards.empty() )
                    r.bulk.push_back( std::move( b ) );
            }
            BulkUpdate reset;
            reset.array = sym.act;
            reset.otherwise = Term::constant( _s.nop );
            r.bulk.push_back( std::move( reset ) );
        }
    }

    std::vector<std::string> local_actions_of_agents() const
    {
        std::vector<std::string> out;
        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
            if ( static_cast<int>( t ) != _env )
                for ( const auto& a : _p.templates[t].actions )
                    if ( a.kind == model::ActionKind::Local )
                        out.push_back( a.name );
        return out;
    }

    void bulks( const char* from )
    {
        const auto locals = local_actions_of_agents();
        const auto& envt = _p.templates[_env];
        const int env_group = _p.turn_group( _env );
        for ( const auto& a : envt.actions )
        {
            if ( a.kind != model::ActionKind::Local )
                continue;
            TransitionRule r;
            r.kind = StepKind::BulkLocal;
            r.action = a.name;
            r.tmpl = _env;
            r.label = "bulk:" + a.name;
            r.guard.push_back( phase_is( from ) );
            r.guard.push_back( Literal::eq( Term::global( _s.env_act ), act_const( a.name ) ) );
            add_turn_guard( r, env_group );
            apply_effects( r, locals );
            env_effects( r, &a );
            r.assigns.emplace_back( Term::global( _s.env_act ), Term::constant( _s.nop ) );
            r.assigns.push_back( set_phase( "P0" ) );
            add_turn_toggle( r, env_group );
            push( std::move( r ) );
        }
        // idle environment: one rule per turn group that holds an agent template
        std::vector<int> groups{ 0 };
        if ( _p.alternation )
        {
            groups.clear();
            for ( int g : { 0, 1 } )
            {
                const auto& members = g == 0 ? _p.alternation->first : _p.alternation->second;
                if ( std::any_of( members.begin(), members.end(), [&]( int t ) { return t != _env; } ) )
                    groups.push_back( g );
            }
        }
        for ( int g : groups )
        {
            TransitionRule r;
            r.kind = StepKind::BulkLocal;
            r.label = "bulk:idle";
            if ( _p.alternation )
                r.label += "@" + _s.sig.constant_name( _s.turn_consts[g] );
            r.guard.push_back( phase_is( from ) );
            r.guard.push_back( Literal::eq( Term::global( _s.env_act ), Term::constant( _s.nop ) ) );
            add_turn_guard( r, g );
            apply_effects( r, locals );
            r.assigns.emplace_back( Term::global( _s.env_act ), Term::constant( _s.nop ) );
            r.assigns.push_back( set_phase( "P0" ) );
            add_turn_toggle( r, g );
            push( std::move( r ) );
        }
    }

    // Universal gate item for one agent template: act[j] != nop or none of `actions` is executable.
    std::optional<UniversalGuard> gate_item( int t, const std::vector<const model::Action*>& actions, VarId first ) const
    {
        if ( actions.empty() )
            return std::nullopt;
        UniversalGuard u;
        std::vector<Formula> blocked;
        const bool env = t == _env;
        if ( !env )
            u.vars.push_back( _s.templates[t].index );
        for ( const auto* a : actions )
        {
            const VarId base = first + static_cast<VarId>( u.vars.size() );
            auto tr = env ? translate_with_self( _s, _p, a->pre, SelfBinding::env(), std::nullopt, base )
                          : translate_with_self( _s, _p, a->pre, SelfBinding::at( first ), _s.templates[t].index, base );
            u.vars.insert( u.vars.end(), tr.new_vars.begin(), tr.new_vars.end() );
            blocked.push_back( Formula::negate( std::move( tr.formula ) ) );
        }
        const Term act = env ? Term::global( _s.env_act ) : Term::read( _s.templates[t].act, first );
        u.matrix = Formula::disj( { Formula::literal( Literal::neq( act, Term::constant( _s.nop ) ) ),
                                    Formula::conj( std::move( blocked ) ) } );
        return u;
    }

    void local_gates()
    {
        std::vector<int> groups{ 0 };
        if ( _p.alternation )
            groups = { 0, 1 };
        for ( int g : groups )
        {
            TransitionRule r;
            r.kind = StepKind::LocalGate;
            r.label = "local-gate";
            if ( _p.alternation )
                r.label += "@" + _s.sig.constant_name( _s.turn_consts[g] );
            r.guard.push_back( phase_is( "PL" ) );
            add_turn_guard( r, g );
            for ( std::size_t t = 0; t < _p.templates.size(); ++t )
            {
                const int ti = static_cast<int>( t );
                if ( _p.alternation && _p.turn_group( ti ) != g )
                    continue;
                std::vector<const model::Action*> locals;
                for ( const auto& a : _p.templates[t].actions )
                    if ( a.kind == model::ActionKind::Local )
                        locals.push_back( &a );
                if ( auto u = gate_item( ti, locals, 0 ) )
                    r.uguards.push_back( std::move( *u ) );
            }
            r.assigns.push_back( set_phase( "PL2" ) );
            push( std::move( r ) );
        }
    }

    void sync( const std::string& name )
    {
        const auto* env_action = _p.find_action( _env, name );
        const int group = _p.sync_group( name );
        const bool individual = env_action && env_action->kind == model::ActionKind::Individual;
        const bool conc = _s.semantics == Semantics::Concurrent;

        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
        {
            const int ti = static_cast<int>( t );
            if ( ti == _env )
                continue;
            const auto* a = _p.find_action( ti, name );
            if ( !a )
                continue;
            const auto& sym = _s.templates[t];
            const auto& tm = _p.templates[t];

            TransitionRule r;
            r.kind = individual ? StepKind::Individual : StepKind::Start;
            r.action = name;
            r.tmpl = ti;
            r.label = std::string( individual ? "individual:" : "start:" ) + name + "@" + tm.name;
            r.vars.push_back( sym.index );
            r.has_self = true;
            r.guard.push_back( phase_is( "P0" ) );
            add_turn_guard( r, group );
            r.guard.push_back( Literal::eq( Term::read( sym.act, 0 ), Term::constant( _s.nop ) ) );
            r.guard.push_back( Literal::eq( Term::global( _s.env_act ), Term::constant( _s.nop ) ) );
            bool ok = add_pre( r, a->pre, SelfBinding::at( 0 ), sym.index );
            if ( ok && env_action )
                ok = add_pre( r, env_action->pre, SelfBinding::env(), std::nullopt );
            if ( ok )
            {
                if ( individual )
                {
                    env_effects( r, env_action );
                    for ( const auto& e : a->effects )
                        r.assigns.emplace_back( Term::read( sym.arrays[_p.slot( e.var )], 0 ),
                                                Term::constant( _s.values[_p.vars[e.var].sort][e.value] ) );
                    add_turn_toggle( r, group );
                }
                else
                {
                    r.assigns.emplace_back( Term::read( sym.act, 0 ), act_const( name ) );
                    r.assigns.emplace_back( Term::global( _s.env_act ), act_const( name ) );
                    r.assigns.push_back( set_phase( "PS" ) );
                }
                push( std::move( r ) );
            }
        }
        if ( individual )
            return;

        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
        {
            const int ti = static_cast<int>( t );
            if ( ti == _env )
                continue;
            const auto* a = _p.find_action( ti, name );
            if ( !a )
                continue;
            const auto& sym = _s.templates[t];
            TransitionRule r;
            r.kind = StepKind::Join;
            r.action = name;
            r.tmpl = ti;
            r.label = "join:" + name + "@" + _p.templates[t].name;
            r.vars.push_back( sym.index );
            r.has_self = true;
            r.guard.push_back( phase_is( "PS" ) );
            r.guard.push_back( Literal::eq( Term::global( _s.env_act ), act_const( name ) ) );
            r.guard.push_back( Literal::eq( Term::read( sym.act, 0 ), Term::constant( _s.nop ) ) );
            if ( !add_pre( r, a->pre, SelfBinding::at( 0 ), sym.index ) )
                continue;
            r.assigns.emplace_back( Term::read( sym.act, 0 ), act_const( name ) );
            r.assigns.push_back( set_phase( "PS" ) );
            push( std::move( r ) );
        }

        if ( conc )
        {
            TransitionRule g;
            g.kind = StepKind::SyncGate;
            g.action = name;
            g.label = "sync-gate:" + name;
            g.guard.push_back( phase_is( "PS" ) );
            g.guard.push_back( Literal::eq( Term::global( _s.env_act ), act_const( name ) ) );
            for ( std::size_t t = 0; t < _p.templates.size(); ++t )
            {
                const int ti = static_cast<int>( t );
                if ( ti == _env )
                    continue;
                if ( const auto* a = _p.find_action( ti, name ) )
                    if ( auto u = gate_item( ti, { a }, 0 ) )
                        g.uguards.push_back( std::move( *u ) );
            }
            g.assigns.push_back( set_phase( "PS2" ) );
            push( std::move( g ) );
        }

        TransitionRule c;
        c.kind = StepKind::Commit;
        c.action = name;
        c.label = "commit:" + name;
        c.guard.push_back( phase_is( conc ? "PS2" : "PS" ) );
        c.guard.push_back( Literal::eq( Term::global( _s.env_act ), act_const( name ) ) );
        add_turn_guard( c, group );
        apply_effects( c, { name } );
        env_effects( c, env_action );
        c.assigns.emplace_back( Term::global( _s.env_act ), Term::constant( _s.nop ) );
        c.assigns.push_back( set_phase( "P0" ) );
        add_turn_toggle( c, group );
        push( std::move( c ) );
    }

    AbPmas& _s;
    const model::Pmas& _p;
    int _env;
};

} // namespace

AbPmas encode_interleaved( const model::Pmas& p )
{
    auto s = encode_signature( p, Semantics::Interleaved );
    RuleBuilder( s, p ).interleaved();
    return s;
}

AbPmas encode_concurrent( const model::Pmas& p )
{
    auto s = encode_signature( p, Semantics::Concurrent );
    RuleBuilder( s, p ).concurrent();
    return s;
}

AbPmas encode( const model::Pmas& p, Semantics sem )
{
    return sem == Semantics::Interleaved ? encode_interleaved( p ) : encode_concurrent( p );
}

std::vector<logic::Cube> differentiate( const logic::Signature& sig, const logic::Cube& c )
{
    std::vector<logic::Cube> out;
    for ( const auto& rep : logic::alldiff_partitions( c.vars ) )
    {
        logic::Cube d;
        std::vector<VarId> compact( c.vars.size() );
        for ( std::size_t v = 0; v < c.vars.size(); ++v )
        {
            if ( rep[v] == v )
            {
                compact[v] = static_cast<VarId>( d.vars.size() );
                d.vars.push_back( c.vars[v] );
            }
            else
                compact[v] = compact[rep[v]];
        }
        bool dead = false;
        for ( const auto& l : c.lits )
        {
            auto r = logic::rename( l, compact );
            if ( logic::is_index_literal( sig, d.vars, r ) )
            {
                const bool same = r.args[0] == r.args[1];
                if ( same != r.positive )
                {
                    dead = true;
                    break;
                }
                continue;
            }
            if ( r.kind == Literal::Kind::Eq && r.args[0] == r.args[1] )
            {
                if ( !r.positive )
                {
                    dead = true;
                    break;
                }
                continue;
            }
            d.lits.push_back( std::move( r ) );
        }
        if ( dead )
            continue;
        std::sort( d.lits.begin(), d.lits.end() );
        d.lits.erase( std::unique( d.lits.begin(), d.lits.end() ), d.lits.end() );
        out.push_back( std::move( d ) );
    }
    return out;
}

logic::StateFormula encode_goal( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& goal )
{
    std::function<bool( const model::FNode& )> uses_self = [&]( const model::FNode& n ) {
        for ( const auto& t : n.terms )
            if ( t.kind == model::ATerm::Kind::Read && t.at.kind == model::IndexRef::Kind::Self )
                return true;
        if ( n.kind == model::FNode::Kind::IdxEq
             && ( n.a.kind == model::IndexRef::Kind::Self || n.b.kind == model::IndexRef::Kind::Self ) )
            return true;
        return std::any_of( n.kids.begin(), n.kids.end(), uses_self );
    };
    if ( uses_self( goal.root ) )
        throw logic::EncodingError( "a goal cannot mention self" );

    auto tr = translate_formula( s, p, goal, SelfBinding::none(), 0 );
    logic::StateFormula out;
    for ( auto& lits : logic::dnf( tr.formula ) )
    {
        logic::Cube c{ tr.new_vars, std::move( lits ) };
        // variables the disjunct does not mention still assert that an agent exists
        for ( auto& d : differentiate( s.sig, c ) )
            out.cubes.push_back( std::move( d ) );
    }
    return out;
}

} // namespace parasafe::encoder
