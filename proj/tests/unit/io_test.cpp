#include "parasafe/encoder/encoder.hpp"
#include "parasafe/io/mcmt.hpp"
#include "parasafe/logic/errors.hpp"
#include "parasafe/model/parser.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace parasafe;
using io::WitnessToken;

namespace
{

std::string fixture( const std::string& name )
{
    std::ifstream in( std::string( PARASAFE_FIXTURES ) + "/" + name );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cannon_mcmt()
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    return io::emit_mcmt( s, encoder::encode_goal( s, p, *p.goal ) );
}

struct Outcome
{
    int code = -1;
    std::string out;
};

Outcome run_cli( const std::string& args )
{
    const std::string cmd = std::string( PARASAFE_CLI ) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen( cmd.c_str(), "r" );
    if ( pipe == nullptr )
        return o;
    char buf[4096];
    std::size_t n = 0;
    while ( ( n = fread( buf, 1, sizeof buf, pipe ) ) > 0 )
        o.out.append( buf, n );
    const int status = pclose( pipe );
    o.code = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
    return o;
}

std::string fx( const std::string& name ) { return std::string( PARASAFE_FIXTURES ) + "/" + name; }

} // namespace

TEST( Witness, ParsesTokens )
{
    EXPECT_TRUE( io::parse_mcmt_witness( "" ).empty() );
    EXPECT_EQ( io::parse_mcmt_witness( "[t3_1]" ), ( std::vector<WitnessToken>{ { 3, 1 } } ) );
    const auto tokens = io::parse_mcmt_witness( "[t2][t17][t3_1][t15][t1][t16][t5_1][t15]" );
    ASSERT_EQ( tokens.size(), 8U );
    EXPECT_EQ( tokens[1], ( WitnessToken{ 17, std::nullopt } ) );
    EXPECT_EQ( tokens[6], ( WitnessToken{ 5, 1 } ) );
    EXPECT_EQ( io::parse_mcmt_witness( " [t2]\n [t4] " ).size(), 2U );
    EXPECT_EQ( io::format_mcmt_witness( tokens ), "[t2][t17][t3_1][t15][t1][t16][t5_1][t15]" );
}

TEST( Witness, MalformedTokenIsPositioned )
{
    for ( const auto& [text, column] : std::vector<std::pair<std::string, int>>{
              { "[t2][x5]", 6 }, { "[t2][t]", 7 }, { "[t2", 4 }, { "t2", 1 }, { "[t0]", 3 } } )
    {
        try
        {
            (void)io::parse_mcmt_witness( text );
            ADD_FAILURE() << "accepted " << text;
        }
        catch ( const model::ParseError& e )
        {
            EXPECT_EQ( e.diagnostics().front().pos.column, column ) << text << ": " << e.what();
        }
    }
}

TEST( Mcmt, CannonMatchesGolden )
{
    EXPECT_EQ( cannon_mcmt(), fixture( "cannon.mcmt" ) );
}

TEST( Mcmt, BulkPulseHasFiveCases )
{
    const auto text = cannon_mcmt();
    const auto at = text.find( ":comment bulk:pulseA" );
    ASSERT_NE( at, std::string::npos );
    const auto cases = text.find( ":numcases", at );
    EXPECT_EQ( text.substr( cases, text.find( '\n', cases ) - cases ), ":numcases 5" );
    EXPECT_NE( text.find( ":u_cnj (= locATT[z1] target)" ), std::string::npos );
}

TEST( Mcmt, EmptyGoalRejected )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    EXPECT_THROW( (void)io::emit_mcmt( s, logic::StateFormula{} ), logic::EncodingError );
}

TEST( Mcmt, LabelsFollowRuleOrder )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    const auto labels = io::mcmt_transition_labels( cannon_mcmt() );
    ASSERT_EQ( labels.size(), s.rules.size() );
    for ( std::size_t i = 0; i < labels.size(); ++i )
        EXPECT_EQ( labels[i], s.rules[i].label );
}

TEST( Cli, ExitCodes )
{
    EXPECT_EQ( run_cli( "check " + fx( "cannon.pmas" ) ).code, 1 );
    EXPECT_EQ( run_cli( "check " + fx( "trains.pmas" ) ).code, 0 );
    EXPECT_EQ( run_cli( "check " + fx( "cannon.pmas" ) + " --max-depth 1" ).code, 2 );
    EXPECT_EQ( run_cli( "check /nonexistent.pmas" ).code, 3 );
    EXPECT_EQ( run_cli( "check " + fx( "cannon.pmas" ) + " --goal 'loc[self] = A'" ).code, 3 );
    EXPECT_EQ( run_cli( "oracle " + fx( "cannon.pmas" ) + " --counts Att=1" ).code, 1 );
}

TEST( Cli, CheckReport )
{
    const auto o = run_cli( "check " + fx( "cannon.pmas" ) );
    EXPECT_NE( o.out.find( "verdict: UNSAFE" ), std::string::npos );
    EXPECT_NE( o.out.find( "guaranteed-termination: true" ), std::string::npos );
    EXPECT_NE( o.out.find( "run-template-length: 4" ), std::string::npos );
    const auto x = run_cli( "check " + fx( "crossindex.pmas" ) );
    EXPECT_NE( x.out.find( "goal-local: false" ), std::string::npos );
}

TEST( Cli, OutputIsDeterministic )
{
    for ( const char* args : { "check", "encode", "emit-mcmt", "check --semantics concurrent" } )
    {
        const auto a = run_cli( std::string( args ) + " " + fx( "cannon.pmas" ) );
        const auto b = run_cli( std::string( args ) + " " + fx( "cannon.pmas" ) );
        EXPECT_FALSE( a.out.empty() ) << args;
        EXPECT_EQ( a.out, b.out ) << args;
    }
}
