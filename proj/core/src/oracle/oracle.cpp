#include "parasafe/oracle/oracle.hpp"

#include "parasafe/encoder/encoder.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace parasafe::oracle
{

using model::AgentRef;
using model::Snapshot;

const char* to_string( ReachResult::Kind k )
{
    switch ( k )
    {
    case ReachResult::Kind::Reached:
        return "REACHED";
    case ReachResult::Kind::NotReached:
        return "NOT-REACHED";
    case ReachResult::Kind::Overflow:
        return "OVERFLOW";
    }
    return "?";
}

const char* to_string( Agreement a )
{
    switch ( a )
    {
    case Agreement::AgreeSafe:
        return "agree-safe";
    case Agreement::AgreeUnsafe:
        return "agree-unsafe";
    case Agreement::EngineUnsafeOracleSilent:
        return "engine-unsafe-oracle-silent";
    case Agreement::EngineSafeOracleReached:
        return "engine-safe-oracle-reached";
    case Agreement::EngineUnknown:
        return "engine-unknown";
    case Agreement::OracleOverflow:
        return "oracle-overflow";
    }
    return "?";
}

RunStep step_of( const model::Pmas& p, const Move& m )
{
    RunStep s;
    s.kind = m.kind;
    for ( std::size_t t = 0; t < m.choice.size(); ++t )
        for ( int a : m.choice[t] )
            if ( a >= 0 )
                s.actions.emplace_back( p.templates[t].actions[a].name, static_cast<int>( t ) );
    std::sort( s.actions.begin(), s.actions.end() );
    s.actions.erase( std::unique( s.actions.begin(), s.actions.end() ), s.actions.end() );
    return s;
}

Snapshot canonical( Snapshot g )
{
    int id = 0;
    for ( auto& agents : g.agents )
    {
        std::sort( agents.begin(), agents.end(), []( const model::Agent& a, const model::Agent& b ) { return a.vals < b.vals; } );
        for ( auto& a : agents )
            a.id = id++;
    }
    return g;
}

namespace
{

class Stepper
{
public:
    Stepper( const model::Pmas& p, const model::RelInterpretation& interp, Semantics sem, const Snapshot& g )
        : _p( p ), _interp( interp ), _sem( sem ), _g( g ), _env( p.env_template() )
    {
    }

    std::vector<std::pair<Move, Snapshot>> run()
    {
        local_steps();
        sync_steps();
        return std::move( _out );
    }

private:
    [[nodiscard]] bool allowed( int group ) const { return !_p.alternation || group == _g.turn; }

    [[nodiscard]] bool enabled( int t, int i, const model::Action& a ) const
    {
        return model::eval_agent_formula( _p, _g, _interp, a.pre, AgentRef{ t, i } );
    }

    void emit( const Move& m )
    {
        Snapshot next = _g;
        for ( std::size_t t = 0; t < m.choice.size(); ++t )
            for ( std::size_t i = 0; i < m.choice[t].size(); ++i )
            {
                const int a = m.choice[t][i];
                if ( a < 0 )
                    continue;
                for ( const auto& e : _p.templates[t].actions[a].effects )
                    next.agents[t][i].vals[_p.slot( e.var )] = e.value;
            }
        if ( _p.alternation )
            next.turn = 1 - next.turn;
        _out.emplace_back( m, canonical( std::move( next ) ) );
    }

    void local_steps()
    {
        std::vector<std::vector<std::vector<int>>> options( _p.templates.size() );
        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
        {
            const int ti = static_cast<int>( t );
            for ( std::size_t i = 0; i < _g.agents[t].size(); ++i )
            {
                std::vector<int> exec;
                if ( allowed( _p.turn_group( ti ) ) )
                    for ( std::size_t a = 0; a < _p.templates[t].actions.size(); ++a )
                    {
                        const auto& act = _p.templates[t].actions[a];
                        if ( act.kind == model::ActionKind::Local && enabled( ti, static_cast<int>( i ), act ) )
                            exec.push_back( static_cast<int>( a ) );
                    }
                std::vector<int> opts;
                if ( _sem == Semantics::Interleaved || exec.empty() )
                    opts.push_back( -1 );
                opts.insert( opts.end(), exec.begin(), exec.end() );
                options[t].push_back( std::move( opts ) );
            }
        }
        Move m;
        m.kind = RunStep::Kind::Local;
        m.choice.resize( _p.templates.size() );
        for ( std::size_t t = 0; t < _p.templates.size(); ++t )
            m.choice[t].assign( _g.agents[t].size(), -1 );
        product( options, m, 0, 0, false );
    }

    void product( const std::vector<std::vector<std::vector<int>>>& options, Move& m, std::size_t t, std::size_t i,
                  bool any )
    {
        if ( t == options.size() )
        {
            if ( any )
                emit( m );
            return;
        }
        if ( i == options[t].size() )
        {
            product( options, m, t + 1, 0, any );
            return;
        }
        for ( int a : options[t][i] )
        {
            m.choice[t][i] = a;
            product( options, m, t, i + 1, any || a >= 0 );
        }
        m.choice[t][i] = -1;
    }

    void sync_steps()
    {
        for ( const auto& name : _p.sync_actions() )
        {
            const auto& env_actions = _p.templates[_env].actions;
            auto it = std::find_if( env_actions.begin(), env_actions.end(),
                                    [&]( const model::Action& a ) { return a.name == name; } );
            if ( it == env_actions.end() || !allowed( _p.sync_group( name ) ) )
                continue;
            if ( !enabled( _env, 0, *it ) )
                continue;
            const int env_index = static_cast<int>( it - env_actions.begin() );
            const bool individual = it->kind == model::ActionKind::Individual;

            std::vector<std::pair<int, int>> able; // (template, agent)
            std::vector<int> index_in( _p.templates.size(), -1 );
            for ( std::size_t t = 0; t < _p.templates.size(); ++t )
            {
                if ( static_cast<int>( t ) == _env )
                    continue;
                const auto& acts = _p.templates[t].actions;
                for ( std::size_t a = 0; a < acts.size(); ++a )
                    if ( acts[a].name == name )
                        index_in[t] = static_cast<int>( a );
                if ( index_in[t] < 0 )
                    continue;
                for ( std::size_t i = 0; i < _g.agents[t].size(); ++i )
                    if ( enabled( static_cast<int>( t ), static_cast<int>( i ), acts[index_in[t]] ) )
                        able.emplace_back( static_cast<int>( t ), static_cast<int>( i ) );
            }
            if ( able.empty() )
                continue;

            Move base;
            base.kind = individual ? RunStep::Kind::Individual : RunStep::Kind::Sync;
            base.choice.resize( _p.templates.size() );
            for ( std::size_t t = 0; t < _p.templates.size(); ++t )
                base.choice[t].assign( _g.agents[t].size(), -1 );
            base.choice[_env][0] = env_index;

            auto with = [&]( std::uint64_t mask ) {
                Move m = base;
                for ( std::size_t k = 0; k < able.size(); ++k )
                    if ( mask >> k & 1U )
                        m.choice[able[k].first][able[k].second] = index_in[able[k].first];
                emit( m );
            };
            if ( individual )
                for ( std::size_t k = 0; k < able.size(); ++k )
                    with( std::uint64_t{ 1 } << k );
            else if ( _sem == Semantics::Concurrent )
                with( ( std::uint64_t{ 1 } << able.size() ) - 1 );
            else
                for ( std::uint64_t mask = 1; mask < ( std::uint64_t{ 1 } << able.size() ); ++mask )
                    with( mask );
        }
    }

    const model::Pmas& _p;
    const model::RelInterpretation& _interp;
    Semantics _sem;
    const Snapshot& _g;
    int _env;
    std::vector<std::pair<Move, Snapshot>> _out;
};

} // namespace

std::vector<std::pair<Move, Snapshot>> successors( const model::Pmas& p, const model::RelInterpretation& interp,
                                                   Semantics sem, const Snapshot& g )
{
    return Stepper( p, interp, sem, g ).run();
}

ReachResult enumerate_reachable( const model::Pmas& p, const ConcreteConfig& cfg, const model::AgentFormula& goal )
{
    struct Node
    {
        Snapshot g;
        std::size_t parent;
        RunStep step;
        int depth;
    };
    ReachResult r;
    std::vector<Node> nodes;
    std::map<Snapshot, std::size_t> seen;
    auto found = [&]( std::size_t id ) {
        r.kind = ReachResult::Kind::Reached;
        std::vector<std::size_t> chain;
        for ( auto k = id; k != SIZE_MAX; k = nodes[k].parent )
            chain.push_back( k );
        std::reverse( chain.begin(), chain.end() );
        for ( std::size_t k = 0; k < chain.size(); ++k )
        {
            r.run.states.push_back( nodes[chain[k]].g );
            if ( k > 0 )
                r.run.steps.push_back( nodes[chain[k]].step );
        }
        r.states = nodes.size();
        return r;
    };

    auto init = canonical( model::initial_snapshot( p, cfg.counts ) );
    nodes.push_back( { init, SIZE_MAX, {}, 0 } );
    seen.emplace( init, 0 );
    if ( model::eval_agent_formula( p, init, cfg.interp, goal ) )
        return found( 0 );
    for ( std::size_t head = 0; head < nodes.size(); ++head )
    {
        if ( nodes[head].depth >= cfg.depth )
            continue;
        const Snapshot g = nodes[head].g;
        const int depth = nodes[head].depth;
        for ( auto& [move, next] : successors( p, cfg.interp, cfg.semantics, g ) )
        {
            if ( seen.count( next ) )
                continue;
            const auto id = nodes.size();
            seen.emplace( next, id );
            nodes.push_back( { next, head, step_of( p, move ), depth + 1 } );
            if ( model::eval_agent_formula( p, next, cfg.interp, goal ) )
                return found( id );
            if ( nodes.size() > cfg.state_cap )
            {
                r.kind = ReachResult::Kind::Overflow;
                r.states = nodes.size();
                return r;
            }
        }
    }
    r.kind = ReachResult::Kind::NotReached;
    r.states = nodes.size();
    return r;
}

ReplayResult replay_run_template( const model::Pmas& p, const std::vector<RunStep>& steps, const ConcreteConfig& cfg,
                                  const model::AgentFormula& goal )
{
    std::set<Snapshot> frontier{ canonical( model::initial_snapshot( p, cfg.counts ) ) };
    for ( std::size_t k = 0; k < steps.size(); ++k )
    {
        std::set<Snapshot> next;
        for ( const auto& g : frontier )
            for ( auto& [move, succ] : successors( p, cfg.interp, cfg.semantics, g ) )
                if ( step_of( p, move ) == steps[k] )
                    next.insert( std::move( succ ) );
        if ( next.empty() )
            return { false, k, "protocol-violation: no legal global step performs " + steps[k].text( p ) };
        if ( next.size() > cfg.state_cap )
            return { false, k, "state cap exceeded" };
        frontier = std::move( next );
    }
    for ( const auto& g : frontier )
        if ( model::eval_agent_formula( p, g, cfg.interp, goal ) )
            return { true, steps.size(), "" };
    return { false, steps.size(), "goal-not-reached" };
}

std::vector<model::RelInterpretation> interpretations( const model::Pmas& p, std::size_t budget, unsigned seed )
{
    std::vector<std::pair<int, std::vector<int>>> tuples;
    for ( std::size_t r = 0; r < p.relations.size(); ++r )
    {
        std::vector<int> t( p.relations[r].sorts.size(), 0 );
        for ( ;; )
        {
            tuples.emplace_back( static_cast<int>( r ), t );
            std::size_t k = 0;
            for ( ; k < t.size(); ++k )
            {
                if ( ++t[k] < static_cast<int>( p.sorts[p.relations[r].sorts[k]].values.size() ) )
                    break;
                t[k] = 0;
            }
            if ( k == t.size() )
                break;
        }
    }
    auto build = [&]( const std::vector<bool>& on ) {
        auto interp = model::empty_interpretation( p );
        for ( std::size_t i = 0; i < tuples.size(); ++i )
            if ( on[i] )
                interp.tuples[tuples[i].first].push_back( tuples[i].second );
        for ( auto& ts : interp.tuples )
            std::sort( ts.begin(), ts.end() );
        return interp;
    };

    std::vector<model::RelInterpretation> out;
    const std::size_t n = tuples.size();
    if ( n < 63 && ( std::uint64_t{ 1 } << n ) <= budget )
    {
        for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << n ); ++mask )
        {
            std::vector<bool> on( n );
            for ( std::size_t i = 0; i < n; ++i )
                on[i] = mask >> i & 1U;
            out.push_back( build( on ) );
        }
        return out;
    }
    std::mt19937 rng( seed );
    std::bernoulli_distribution coin( 0.5 );
    out.push_back( build( std::vector<bool>( n, false ) ) );
    while ( out.size() < budget )
    {
        std::vector<bool> on( n );
        for ( std::size_t i = 0; i < n; ++i )
            on[i] = coin( rng );
        out.push_back( build( on ) );
    }
    return out;
}

CrossCheckReport cross_check( const model::Pmas& p, const model::AgentFormula& goal, Semantics sem,
                              const CrossCheckBounds& bounds )
{
    CrossCheckReport rep;
    const auto s = encoder::encode( p, sem );
    const auto g = encoder::encode_goal( s, p, goal );
    rep.verdict = engine::breach( s, g, bounds.engine );
    const auto kind = rep.verdict.kind;

    const auto interps = interpretations( p, bounds.interpretation_budget );
    const int env = p.env_template();
    std::vector<int> counts( p.templates.size(), 1 );
    counts[env] = 1;
    bool overflow = false;
    for ( ;; )
    {
        for ( std::size_t k = 0; k < interps.size(); ++k )
        {
            ConcreteConfig cfg{ counts, interps[k], sem, bounds.max_depth };
            auto r = enumerate_reachable( p, cfg, goal );
            ++rep.configurations;
            if ( r.kind == ReachResult::Kind::Overflow )
                overflow = true;
            if ( r.kind != ReachResult::Kind::Reached )
                continue;
            rep.witness_counts = counts;
            rep.witness_interpretation = k;
            rep.witness = std::move( r.run );
            if ( kind == engine::Verdict::Kind::Unknown )
                rep.agreement = Agreement::EngineUnknown;
            else
                rep.agreement = kind == engine::Verdict::Kind::Safe ? Agreement::EngineSafeOracleReached
                                                                    : Agreement::AgreeUnsafe;
            return rep;
        }
        // next agent-count vector
        std::size_t t = 0;
        for ( ; t < counts.size(); ++t )
        {
            if ( static_cast<int>( t ) == env )
                continue;
            if ( ++counts[t] <= bounds.max_count )
                break;
            counts[t] = 1;
        }
        if ( t == counts.size() )
            break;
    }
    if ( kind == engine::Verdict::Kind::Unknown )
        rep.agreement = Agreement::EngineUnknown;
    else if ( overflow )
        rep.agreement = Agreement::OracleOverflow;
    else
        rep.agreement = kind == engine::Verdict::Kind::Safe ? Agreement::AgreeSafe : Agreement::EngineUnsafeOracleSilent;
    return rep;
}

namespace
{

class Generator
{
public:
    Generator( unsigned seed, const CorpusParams& params ) : _rng( seed ), _params( params ) {}

    std::string run()
    {
        const int agents = pick( 1, _params.max_agent_templates );
        const int sorts = pick( 1, 3 );
        for ( int s = 0; s < sorts; ++s )
        {
            const int n = pick( 2, _params.max_values );
            std::vector<std::string> vals;
            for ( int v = 0; v < n; ++v )
                vals.push_back( "c" + std::to_string( s ) + "_" + std::to_string( v ) );
            _sorts.push_back( vals );
            _out += "sort S" + std::to_string( s ) + " { ";
            for ( int v = 0; v < n; ++v )
                _out += ( v ? ", " : "" ) + vals[v];
            _out += " }\n";
        }
        if ( _params.relation && chance( 0.5 ) )
        {
            _rel_sort = pick( 0, sorts - 1 );
            _out += "relation R(S" + std::to_string( _rel_sort ) + ", S" + std::to_string( _rel_sort ) + ")\n";
        }

        // variables first, so preconditions can mention any template
        for ( int t = 0; t < agents; ++t )
        {
            std::vector<Var> vars;
            const int nv = pick( 1, _params.max_vars );
            for ( int v = 0; v < nv; ++v )
                vars.push_back( { "v" + std::to_string( t ) + "_" + std::to_string( v ), pick( 0, sorts - 1 ) } );
            _vars.push_back( vars );
        }
        if ( chance( 0.6 ) )
            _env_vars.push_back( { "w", pick( 0, sorts - 1 ) } );

        // actions; shared synchronisation names get an environment side
        std::vector<std::string> bodies( agents );
        std::vector<std::pair<std::string, bool>> syncs; // name, individual
        int next_sync = 0;
        for ( int t = 0; t < agents; ++t )
        {
            const int na = pick( 1, _params.max_actions );
            for ( int a = 0; a < na; ++a )
            {
                const double roll = uniform();
                if ( roll < 0.5 )
                    bodies[t] += action( "l" + std::to_string( t ) + "_" + std::to_string( a ), "local", t );
                else
                {
                    const bool individual = roll > 0.8;
                    std::string name;
                    // reuse a synchronisation of another template now and then
                    if ( !syncs.empty() && chance( 0.3 ) )
                    {
                        const auto& [n, ind] = syncs[pick( 0, static_cast<int>( syncs.size() ) - 1 )];
                        if ( bodies[t].find( "action " + n + " " ) != std::string::npos )
                            continue;
                        bodies[t] += action( n, ind ? "individual" : "sync", t );
                        continue;
                    }
                    name = "y" + std::to_string( next_sync++ );
                    syncs.emplace_back( name, individual );
                    bodies[t] += action( name, individual ? "individual" : "sync", t );
                }
            }
        }
        std::string env_body;
        const int env_locals = pick( 0, 2 );
        for ( int a = 0; a < env_locals; ++a )
            env_body += action( "le" + std::to_string( a ), "local", -1 );
        for ( const auto& [name, ind] : syncs )
            env_body += action( name, ind ? "individual" : "sync", -1 );

        for ( int t = 0; t < agents; ++t )
        {
            _out += "template T" + std::to_string( t ) + " {\n";
            for ( const auto& v : _vars[t] )
                _out += "  var " + v.name + ": S" + std::to_string( v.sort ) + " = " + value( v.sort, 0 ) + "\n";
            _out += bodies[t] + "}\n";
        }
        _out += "template E env {\n";
        for ( const auto& v : _env_vars )
            _out += "  var " + v.name + ": S" + std::to_string( v.sort ) + " = " + value( v.sort, 0 ) + "\n";
        _out += env_body + "}\n";
        if ( chance( 0.2 ) )
        {
            _out += "alternate { E } vs { ";
            for ( int t = 0; t < agents; ++t )
                _out += ( t ? ", T" : "T" ) + std::to_string( t );
            _out += " }\n";
        }
        _out += "goal: " + goal( agents ) + "\n";
        return _out;
    }

private:
    struct Var
    {
        std::string name;
        int sort;
    };

    int pick( int lo, int hi ) { return std::uniform_int_distribution<int>( lo, hi )( _rng ); }
    double uniform() { return std::uniform_real_distribution<double>( 0.0, 1.0 )( _rng ); }
    bool chance( double p ) { return uniform() < p; }

    std::string value( int sort, int v ) const { return _sorts[sort][v]; }
    std::string any_value( int sort ) { return _sorts[sort][pick( 0, static_cast<int>( _sorts[sort].size() ) - 1 )]; }

    // One literal about an index; `at` is self, e or a typed index variable.
    std::string literal( const Var& v, const std::string& at )
    {
        const std::string read = v.name + "[" + at + "]";
        if ( _rel_sort == v.sort && chance( 0.25 ) )
            return std::string( chance( 0.5 ) ? "not " : "" ) + "R(" + read + ", " + any_value( v.sort ) + ")";
        return read + ( chance( 0.7 ) ? " = " : " != " ) + any_value( v.sort );
    }

    std::string action( const std::string& name, const std::string& kind, int t )
    {
        std::vector<std::string> lits;
        const auto& own = t >= 0 ? _vars[t] : _env_vars;
        const std::string self = t >= 0 ? "self" : "e";
        const int n = pick( 0, 2 );
        for ( int k = 0; k < n; ++k )
        {
            const double roll = uniform();
            if ( roll < 0.6 && !own.empty() )
                lits.push_back( literal( own[pick( 0, static_cast<int>( own.size() ) - 1 )], self ) );
            else if ( roll < 0.8 && !_env_vars.empty() )
                lits.push_back( literal( _env_vars[0], "e" ) );
            else if ( t < 0 && !_vars.empty() )
            {
                const int o = pick( 0, static_cast<int>( _vars.size() ) - 1 );
                const auto& vars = _vars[o];
                lits.push_back( literal( vars[pick( 0, static_cast<int>( vars.size() ) - 1 )], "k" + std::to_string( o ) ) );
            }
        }
        std::string s = "  action " + name + " : " + kind + " {\n    pre: ";
        if ( lits.empty() )
            s += "true";
        for ( std::size_t i = 0; i < lits.size(); ++i )
            s += ( i ? " and " : "" ) + lits[i];
        s += ";\n    eff: ";
        std::vector<int> order( own.size() );
        for ( std::size_t i = 0; i < own.size(); ++i )
            order[i] = static_cast<int>( i );
        std::shuffle( order.begin(), order.end(), _rng );
        const int ne = own.empty() ? 0 : pick( t >= 0 ? 1 : 0, static_cast<int>( own.size() ) );
        for ( int k = 0; k < ne; ++k )
            s += ( k ? ", " : "" ) + own[order[k]].name + " := " + any_value( own[order[k]].sort );
        s += ";\n  }\n";
        return s;
    }

    std::string goal( int agents )
    {
        std::vector<std::string> lits;
        const int n = pick( 1, 2 );
        std::vector<int> owners;
        for ( int k = 0; k < n; ++k )
        {
            const int t = pick( 0, agents - 1 );
            owners.push_back( t );
            const auto& v = _vars[t][pick( 0, static_cast<int>( _vars[t].size() ) - 1 )];
            lits.push_back( v.name + "[g" + std::to_string( k ) + "] = " + any_value( v.sort ) );
        }
        if ( n == 2 && owners[0] == owners[1] && chance( 0.7 ) )
            lits.push_back( "g0 != g1" );
        if ( !_env_vars.empty() && chance( 0.3 ) )
            lits.push_back( _env_vars[0].name + "[e] = " + any_value( _env_vars[0].sort ) );
        std::string s;
        for ( std::size_t i = 0; i < lits.size(); ++i )
            s += ( i ? " and " : "" ) + lits[i];
        return s;
    }

    std::mt19937 _rng;
    CorpusParams _params;
    std::string _out;
    std::vector<std::vector<std::string>> _sorts;
    int _rel_sort = -1;
    std::vector<std::vector<Var>> _vars;
    std::vector<Var> _env_vars;
};

} // namespace

std::string random_pmas( unsigned seed, const CorpusParams& params ) { return Generator( seed, params ).run(); }

} // namespace parasafe::oracle
