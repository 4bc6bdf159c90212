// parasafe command-line driver.
#include "parasafe/encoder/encoder.hpp"
#include "parasafe/engine/analysis.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/io/mcmt.hpp"
#include "parasafe/logic/errors.hpp"
#include "parasafe/model/eval.hpp"
#include "parasafe/model/parser.hpp"
#include "parasafe/oracle/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace parasafe;

namespace
{

constexpr int kSafe = 0;
constexpr int kUnsafe = 1;
constexpr int kUnknown = 2;
constexpr int kInputError = 3;

struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct CliConfig
{
    std::string model_path;
    std::string semantics = "interleaved";
    std::string goal;
    int max_depth = 200;
    std::size_t max_cubes = 100000;
    std::string counts;
    std::string interp_path;
    std::string out_path;
    std::string trace_out;
    // oracle and cross-check
    int oracle_depth = 15;
    int max_count = 3;
    // explain-witness
    std::string witness;
    std::string mcmt_path;
};

std::string slurp( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw InputError( "cannot read '" + path + "'" );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file( const std::string& path, const std::string& text )
{
    std::ofstream out( path, std::ios::binary );
    if ( !out || !( out << text ) )
        throw InputError( "cannot write '" + path + "'" );
}

encoder::Semantics semantics_of( const CliConfig& c )
{
    return c.semantics == "concurrent" ? encoder::Semantics::Concurrent : encoder::Semantics::Interleaved;
}

struct Loaded
{
    model::Pmas pmas;
    model::AgentFormula goal;
};

Loaded load( const CliConfig& c )
{
    Loaded l{ model::parse_pmas( slurp( c.model_path ) ), {} };
    if ( !c.goal.empty() )
        l.goal = model::parse_goal( l.pmas, c.goal );
    else if ( l.pmas.goal )
        l.goal = *l.pmas.goal;
    else
        throw InputError( "model has no goal; pass --goal" );
    return l;
}

std::vector<int> parse_counts( const model::Pmas& p, const std::string& text )
{
    std::vector<int> counts( p.templates.size(), 1 );
    std::stringstream ss( text );
    std::string item;
    while ( std::getline( ss, item, ',' ) )
    {
        if ( item.empty() )
            continue;
        const auto eq = item.find( '=' );
        if ( eq == std::string::npos )
            throw InputError( "--counts expects T=k, got '" + item + "'" );
        const auto name = item.substr( 0, eq );
        int t = -1;
        for ( std::size_t i = 0; i < p.templates.size(); ++i )
            if ( p.templates[i].name == name )
                t = static_cast<int>( i );
        if ( t < 0 )
            throw InputError( "--counts names unknown template '" + name + "'" );
        if ( t == p.env_template() )
            throw InputError( "--counts cannot change the environment" );
        try
        {
            counts[t] = std::stoi( item.substr( eq + 1 ) );
        }
        catch ( const std::exception& )
        {
            throw InputError( "--counts has a bad number in '" + item + "'" );
        }
        if ( counts[t] < 0 )
            throw InputError( "--counts must be non-negative" );
    }
    return counts;
}

const char* kind_name( engine::RunStep::Kind k )
{
    switch ( k )
    {
    case engine::RunStep::Kind::Local:
        return "local";
    case engine::RunStep::Kind::Sync:
        return "sync";
    case engine::RunStep::Kind::Individual:
        return "individual";
    }
    return "?";
}

void print_run( std::ostream& out, const model::Pmas& p, const std::vector<engine::RunStep>& run )
{
    out << "run-template-length: " << run.size() << "\n";
    for ( std::size_t i = 0; i < run.size(); ++i )
        out << "run-step." << i + 1 << ": " << kind_name( run[i].kind ) << " " << run[i].text( p ) << "\n";
}

void dump_trace( const std::string& path, const std::vector<engine::TraceStep>& trace, const model::Pmas& p )
{
    std::string text;
    for ( std::size_t i = 0; i < trace.size(); ++i )
    {
        const auto& st = trace[i];
        nlohmann::json j{ { "step", i + 1 },
                          { "rule", st.rule + 1 },
                          { "label", st.label },
                          { "kind", encoder::to_string( st.kind ) },
                          { "action", st.action },
                          { "template", st.tmpl >= 0 ? p.templates[st.tmpl].name : "" } };
        text += j.dump() + "\n";
    }
    write_file( path, text );
}

int exit_for( engine::Verdict::Kind k )
{
    switch ( k )
    {
    case engine::Verdict::Kind::Safe:
        return kSafe;
    case engine::Verdict::Kind::Unsafe:
        return kUnsafe;
    case engine::Verdict::Kind::Unknown:
        return kUnknown;
    }
    return kUnknown;
}

int cmd_check( const CliConfig& c )
{
    auto l = load( c );
    const auto s = encoder::encode( l.pmas, semantics_of( c ) );
    const auto goal = encoder::encode_goal( s, l.pmas, l.goal );
    engine::Budgets b;
    b.max_depth = static_cast<std::size_t>( c.max_depth );
    b.max_cubes = c.max_cubes;

    const auto t0 = std::chrono::steady_clock::now();
    const auto v = engine::breach( s, goal, b );
    const double secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - t0 ).count();
    std::cerr << "search took " << secs << " s\n";

    auto& out = std::cout;
    out << "verdict: " << engine::to_string( v.kind ) << "\n";
    out << "semantics: " << c.semantics << "\n";
    out << "rules: " << s.rules.size() << "\n";
    out << "depth: " << v.depth << "\n";
    out << "cubes: " << v.cubes << "\n";
    if ( v.kind == engine::Verdict::Kind::Unknown )
        out << "reason: " << engine::to_string( v.reason ) << "\n";
    if ( v.kind == engine::Verdict::Kind::Unsafe )
    {
        out << "trace-length: " << v.trace.size() << "\n";
        if ( s.semantics == encoder::Semantics::Concurrent )
            out << "spurious-possible: " << ( v.spurious_possible ? "true" : "false" ) << "\n";
        try
        {
            print_run( out, l.pmas, engine::extract_run_template( v, s ) );
        }
        catch ( const std::logic_error& e )
        {
            std::cerr << "run template unavailable: " << e.what() << "\n";
        }
        if ( !c.trace_out.empty() )
            dump_trace( c.trace_out, v.trace, l.pmas );
    }

    const auto loc = engine::check_locality( s, goal, l.pmas );
    out << "goal-local: " << ( loc.goal_local ? "true" : "false" ) << "\n";
    out << "protocols-local: " << ( loc.protocols_local() ? "true" : "false" ) << "\n";
    for ( const auto& [name, local] : loc.protocols )
        if ( !local )
            out << "nonlocal-protocol: " << name << "\n";
    out << "guaranteed-termination: " << ( loc.guaranteed_termination ? "true" : "false" ) << "\n";
    return exit_for( v.kind );
}

// Phase constant a rule requires, and the one it leaves behind.
std::pair<std::string, std::string> phase_edge( const encoder::AbPmas& s, const encoder::TransitionRule& r )
{
    std::string from = "?";
    std::string to;
    const auto ph = logic::Term::global( s.phase );
    for ( const auto& lit : r.guard )
        if ( lit.kind == logic::Literal::Kind::Eq && lit.positive && lit.args[0] == ph && lit.args[1].is_const() )
            from = s.sig.constant_name( lit.args[1].id );
    to = from;
    for ( const auto& [lhs, rhs] : r.assigns )
        if ( lhs == ph )
            to = s.sig.constant_name( rhs.id );
    return { from, to };
}

int cmd_encode( const CliConfig& c )
{
    auto l = load( c );
    const auto s = encoder::encode( l.pmas, semantics_of( c ) );
    auto& out = std::cout;
    out << "semantics: " << c.semantics << "\n";
    out << "rules: " << s.rules.size() << "\n";
    std::map<std::string, int> kinds;
    for ( const auto& r : s.rules )
        ++kinds[encoder::to_string( r.kind )];
    for ( const auto& [k, n] : kinds )
        out << "rules." << k << ": " << n << "\n";
    out << "phases:";
    for ( const auto& [name, id] : s.phase_consts )
        out << " " << name;
    out << "\n";
    std::map<std::pair<std::string, std::string>, std::set<std::string>> edges;
    for ( const auto& r : s.rules )
        edges[phase_edge( s, r )].insert( encoder::to_string( r.kind ) );
    for ( const auto& [e, ks] : edges )
    {
        out << "phase-edge: " << e.first << " -> " << e.second << " [";
        bool first = true;
        for ( const auto& k : ks )
        {
            out << ( first ? "" : "," ) << k;
            first = false;
        }
        out << "]\n";
    }
    for ( std::size_t i = 0; i < s.rules.size(); ++i )
        out << "rule." << i + 1 << ": " << s.rules[i].label << "\n";
    return 0;
}

int cmd_emit( const CliConfig& c )
{
    auto l = load( c );
    const auto s = encoder::encode( l.pmas, semantics_of( c ) );
    const auto text = io::emit_mcmt( s, encoder::encode_goal( s, l.pmas, l.goal ) );
    if ( c.out_path.empty() )
        std::cout << text;
    else
    {
        write_file( c.out_path, text );
        std::cout << "written: " << c.out_path << "\n";
        std::cout << "transitions: " << s.rules.size() << "\n";
    }
    return 0;
}

int cmd_oracle( const CliConfig& c )
{
    auto l = load( c );
    oracle::ConcreteConfig cfg;
    cfg.counts = parse_counts( l.pmas, c.counts );
    cfg.interp = c.interp_path.empty() ? model::empty_interpretation( l.pmas )
                                       : model::parse_interpretation( l.pmas, slurp( c.interp_path ) );
    cfg.semantics = semantics_of( c );
    cfg.depth = c.oracle_depth;
    const auto r = oracle::enumerate_reachable( l.pmas, cfg, l.goal );
    auto& out = std::cout;
    out << "result: " << oracle::to_string( r.kind ) << "\n";
    out << "states: " << r.states << "\n";
    out << "depth-bound: " << cfg.depth << "\n";
    if ( r.kind == oracle::ReachResult::Kind::Reached )
        print_run( out, l.pmas, r.run.steps );
    switch ( r.kind )
    {
    case oracle::ReachResult::Kind::Reached:
        return kUnsafe;
    case oracle::ReachResult::Kind::NotReached:
        return kSafe;
    case oracle::ReachResult::Kind::Overflow:
        return kUnknown;
    }
    return kUnknown;
}

int cmd_explain( const CliConfig& c )
{
    auto l = load( c );
    const auto s = encoder::encode( l.pmas, semantics_of( c ) );
    const auto mcmt = c.mcmt_path.empty() ? io::emit_mcmt( s, encoder::encode_goal( s, l.pmas, l.goal ) )
                                          : slurp( c.mcmt_path );
    const auto labels = io::mcmt_transition_labels( mcmt );
    std::map<std::string, std::size_t> by_label;
    for ( std::size_t r = 0; r < s.rules.size(); ++r )
        by_label.emplace( s.rules[r].label, r );

    engine::Verdict v;
    v.kind = engine::Verdict::Kind::Unsafe;
    const auto tokens = io::parse_mcmt_witness( c.witness );
    auto& out = std::cout;
    out << "tokens: " << tokens.size() << "\n";
    for ( std::size_t i = 0; i < tokens.size(); ++i )
    {
        const auto& t = tokens[i];
        if ( t.ordinal < 1 || static_cast<std::size_t>( t.ordinal ) > labels.size() )
            throw InputError( "witness token " + std::to_string( i + 1 ) + " names transition "
                              + std::to_string( t.ordinal ) + "; the file has " + std::to_string( labels.size() ) );
        const auto it = by_label.find( labels[t.ordinal - 1] );
        if ( it == by_label.end() )
            throw InputError( "transition " + std::to_string( t.ordinal ) + " ('" + labels[t.ordinal - 1]
                              + "') is not a rule of this model" );
        const auto& r = s.rules[it->second];
        v.trace.push_back( { it->second, r.label, r.kind, r.action, r.tmpl } );
        out << "token." << i + 1 << ": " << io::format_mcmt_witness( { t } ) << " " << r.label << "\n";
    }
    try
    {
        print_run( out, l.pmas, engine::extract_run_template( v, s ) );
    }
    catch ( const std::logic_error& e )
    {
        std::cerr << e.what() << "\n";
        out << "run-template: invalid\n";
        return kInputError;
    }
    if ( !c.trace_out.empty() )
        dump_trace( c.trace_out, v.trace, l.pmas );
    return 0;
}

int cmd_cross_check( const CliConfig& c )
{
    auto l = load( c );
    oracle::CrossCheckBounds b;
    b.max_count = c.max_count;
    b.max_depth = c.oracle_depth;
    b.engine.max_depth = static_cast<std::size_t>( c.max_depth );
    b.engine.max_cubes = c.max_cubes;
    const auto r = oracle::cross_check( l.pmas, l.goal, semantics_of( c ), b );
    auto& out = std::cout;
    out << "verdict: " << engine::to_string( r.verdict.kind ) << "\n";
    out << "agreement: " << oracle::to_string( r.agreement ) << "\n";
    out << "configurations: " << r.configurations << "\n";
    if ( !r.witness_counts.empty() )
    {
        out << "witness-counts:";
        bool first = true;
        for ( std::size_t t = 0; t < l.pmas.templates.size(); ++t )
            if ( static_cast<int>( t ) != l.pmas.env_template() )
            {
                out << ( first ? " " : "," ) << l.pmas.templates[t].name << "=" << r.witness_counts[t];
                first = false;
            }
        out << "\n";
        out << "witness-interpretation: " << r.witness_interpretation << "\n";
        print_run( out, l.pmas, r.witness.steps );
    }
    return exit_for( r.verdict.kind );
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "parasafe: safety of parameterised multi-agent systems" };
    app.require_subcommand( 1 );
    CliConfig c;

    auto model_opts = [&]( CLI::App* sub ) {
        sub->add_option( "model", c.model_path, "PMAS model file" )->required();
        sub->add_option( "--semantics", c.semantics, "interleaved or concurrent" )
            ->check( CLI::IsMember( { "interleaved", "concurrent" } ) );
        sub->add_option( "--goal", c.goal, "goal formula, overrides the one in the file" );
    };
    auto budget_opts = [&]( CLI::App* sub ) {
        sub->add_option( "--max-depth", c.max_depth, "backward search depth budget" )->check( CLI::NonNegativeNumber );
        sub->add_option( "--max-cubes", c.max_cubes, "backward search cube budget" );
    };

    auto* check = app.add_subcommand( "check", "backward reachability verdict" );
    model_opts( check );
    budget_opts( check );
    check->add_option( "--trace-out", c.trace_out, "JSONL dump of the rule trace" );

    auto* encode = app.add_subcommand( "encode", "summarise the array-based encoding" );
    model_opts( encode );

    auto* emit = app.add_subcommand( "emit-mcmt", "write the MCMT input file" );
    model_opts( emit );
    emit->add_option( "--out", c.out_path, "output path (stdout if omitted)" );

    auto* orc = app.add_subcommand( "oracle", "explicit-state search of one concrete instance" );
    model_opts( orc );
    orc->add_option( "--counts", c.counts, "agents per template, T=k,..." );
    orc->add_option( "--interp", c.interp_path, "relation tuples, one R(c1,...) per line" );
    orc->add_option( "--max-depth", c.oracle_depth, "step bound" )->check( CLI::NonNegativeNumber );

    auto* explain = app.add_subcommand( "explain-witness", "decode an MCMT witness string" );
    model_opts( explain );
    explain->add_option( "witness", c.witness, "e.g. [t2][t17][t3_1]" )->required();
    explain->add_option( "--mcmt", c.mcmt_path, "emitted MCMT file (regenerated if omitted)" );
    explain->add_option( "--trace-out", c.trace_out, "JSONL dump of the decoded trace" );

    auto* cross = app.add_subcommand( "cross-check", "compare the engine with bounded explicit search" );
    model_opts( cross );
    budget_opts( cross );
    cross->add_option( "--max-count", c.max_count, "largest agent count per template" )->check( CLI::PositiveNumber );
    cross->add_option( "--oracle-depth", c.oracle_depth, "explicit search step bound" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e, std::cerr, std::cerr );
        return kInputError;
    }

    try
    {
        if ( *check )
            return cmd_check( c );
        if ( *encode )
            return cmd_encode( c );
        if ( *emit )
            return cmd_emit( c );
        if ( *orc )
            return cmd_oracle( c );
        if ( *explain )
            return cmd_explain( c );
        if ( *cross )
            return cmd_cross_check( c );
    }
    catch ( const model::ParseError& e )
    {
        std::cerr << c.model_path << ": " << e.what() << "\n";
        return kInputError;
    }
    catch ( const InputError& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    catch ( const logic::EncodingError& e )
    {
        std::cerr << "encoding error: " << e.what() << "\n";
        return kInputError;
    }
    catch ( const logic::IllTypedError& e )
    {
        std::cerr << "type error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
