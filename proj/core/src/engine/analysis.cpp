#include "parasafe/engine/analysis.hpp"

#include "parasafe/encoder/encoder.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace parasafe::engine
{

using logic::Term;

bool cube_is_local( const logic::Cube& c )
{
    for ( const auto& l : c.lits )
    {
        std::set<logic::VarId> vars;
        for ( const auto& t : l.args )
            if ( t.kind == Term::Kind::Var )
                vars.insert( t.id );
            else if ( t.kind == Term::Kind::Read )
                vars.insert( t.index );
        // index (dis)equalities form the Eq part
        const bool index_only = std::all_of( l.args.begin(), l.args.end(), []( const Term& t ) { return t.is_var(); } );
        if ( vars.size() > 1 && !index_only )
            return false;
    }
    return true;
}

bool LocalityReport::protocols_local() const
{
    return std::all_of( protocols.begin(), protocols.end(), []( const auto& e ) { return e.second; } );
}

LocalityReport check_locality( const encoder::AbPmas& s, const logic::StateFormula& goal, const model::Pmas& p )
{
    LocalityReport r;
    r.goal_local = std::all_of( goal.cubes.begin(), goal.cubes.end(), cube_is_local );
    const int env = p.env_template();
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
        for ( const auto& a : p.templates[t].actions )
        {
            const bool is_env = static_cast<int>( t ) == env;
            const auto self = is_env ? encoder::SelfBinding::env() : encoder::SelfBinding::at( 0 );
            auto tr = encoder::translate_agent_formula( s, p, a.pre, self, is_env ? 0 : 1 );
            logic::Cube c{ {}, tr.lits };
            r.protocols.emplace_back( a.name + "@" + p.templates[t].name, cube_is_local( c ) );
        }
    r.interleaved = s.semantics == encoder::Semantics::Interleaved;
    r.guaranteed_termination = r.interleaved && r.goal_local && r.protocols_local();
    return r;
}

std::string RunStep::text( const model::Pmas& p ) const
{
    std::string s;
    for ( std::size_t i = 0; i < actions.size(); ++i )
        s += ( i ? " + " : "" ) + actions[i].first + "@" + p.templates[actions[i].second].name;
    return s.empty() ? "idle" : s;
}

std::vector<RunStep> extract_run_template( const Verdict& v, const encoder::AbPmas& s )
{
    using encoder::StepKind;
    std::vector<RunStep> out;
    std::set<std::pair<std::string, int>> pending;
    int open = -1; // -1 none, 0 local, 1 sync
    auto fail = [&]( const TraceStep& st ) {
        throw std::logic_error( "trace step '" + st.label + "' does not follow the phase graph" );
    };
    int env = -1;
    for ( std::size_t t = 0; t < s.templates.size(); ++t )
        if ( s.templates[t].env )
            env = static_cast<int>( t );

    for ( const auto& st : v.trace )
    {
        switch ( st.kind )
        {
        case StepKind::Declare:
            if ( open == 1 )
                fail( st );
            open = 0;
            pending.emplace( st.action, st.tmpl );
            break;
        case StepKind::LocalGate:
            if ( open != 0 )
                fail( st );
            break;
        case StepKind::BulkLocal:
            if ( open != 0 )
                fail( st );
            out.push_back( { RunStep::Kind::Local, { pending.begin(), pending.end() } } );
            pending.clear();
            open = -1;
            break;
        case StepKind::Start:
            if ( open != -1 )
                fail( st );
            open = 1;
            pending.emplace( st.action, st.tmpl );
            pending.emplace( st.action, env );
            break;
        case StepKind::Join:
        case StepKind::SyncGate:
            if ( open != 1 )
                fail( st );
            if ( st.kind == StepKind::Join )
                pending.emplace( st.action, st.tmpl );
            break;
        case StepKind::Commit:
            if ( open != 1 )
                fail( st );
            out.push_back( { RunStep::Kind::Sync, { pending.begin(), pending.end() } } );
            pending.clear();
            open = -1;
            break;
        case StepKind::Individual:
            if ( open != -1 )
                fail( st );
            out.push_back( { RunStep::Kind::Individual, { { st.action, env }, { st.action, st.tmpl } } } );
            std::sort( out.back().actions.begin(), out.back().actions.end() );
            break;
        }
    }
    if ( open != -1 )
        throw std::logic_error( "trace ends inside a global step" );
    return out;
}

} // namespace parasafe::engine
