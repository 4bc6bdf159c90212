#include "parasafe/encoder/encoder.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/io/mcmt.hpp"
#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/printer.hpp"
#include "parasafe/logic/solver.hpp"
#include "parasafe/model/parser.hpp"
#include "parasafe/oracle/oracle.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace parasafe;
using namespace parasafe::logic;
using encoder::Semantics;
using encoder::StepKind;

namespace
{

std::string fixture( const std::string& name )
{
    std::ifstream in( std::string( PARASAFE_FIXTURES ) + "/" + name );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kOneAction = "sort S { c0, c1 }\n"
                         "template T {\n"
                         "  var v: S = c0\n"
                         "  action m : local { pre: v[self] = c0; eff: v := c1; }\n"
                         "}\n"
                         "template E env { }\n"
                         "goal: v[j] = c1\n";

std::size_t count_kind( const encoder::AbPmas& s, StepKind k )
{
    std::size_t n = 0;
    for ( const auto& r : s.rules )
        n += r.kind == k;
    return n;
}

Term bind( const Term& t, VarId v )
{
    Term out = t;
    if ( t.kind == Term::Kind::Var && t.id == kBoundVar )
        out.id = v;
    if ( t.kind == Term::Kind::Read && t.index == kBoundVar )
        out.index = v;
    return out;
}

Formula bind( const Formula& f, VarId v )
{
    Formula out = f;
    for ( auto& a : out.lit.args )
        a = bind( a, v );
    for ( auto& k : out.kids )
        k = bind( k, v );
    return out;
}

bool sat( const Signature& sig, std::vector<SortId> vars, Formula f )
{
    EFFormula ef;
    ef.exists = std::move( vars );
    ef.matrix = std::move( f );
    return sat_exists_forall( sig, ef );
}

} // namespace

TEST( Encoder, SingleLocalActionGivesThreeRules )
{
    const auto p = model::parse_pmas( kOneAction );
    const auto s = encoder::encode_interleaved( p );
    ASSERT_EQ( s.rules.size(), 3U );
    EXPECT_EQ( count_kind( s, StepKind::Declare ), 2U );
    EXPECT_EQ( count_kind( s, StepKind::BulkLocal ), 1U );
}

TEST( Encoder, NoActionsLeavesOnlyTheBulkRule )
{
    const auto p = model::parse_pmas_unchecked( "sort S { c0, c1 }\n"
                                                "template T { var v: S = c0 }\n"
                                                "template E env { }\n"
                                                "goal: v[j] = c1\n" );
    const auto s = encoder::encode_interleaved( p );
    ASSERT_EQ( s.rules.size(), 1U );
    EXPECT_EQ( s.rules[0].kind, StepKind::BulkLocal );
    const auto v = engine::breach( s, encoder::encode_goal( s, p, *p.goal ) );
    EXPECT_EQ( v.kind, engine::Verdict::Kind::Safe );
}

TEST( Encoder, CannonRuleCounts )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    EXPECT_EQ( s.rules.size(), 23U );
    EXPECT_EQ( count_kind( s, StepKind::Declare ), 12U );
    EXPECT_EQ( count_kind( s, StepKind::Commit ), 2U );
    EXPECT_EQ( count_kind( s, StepKind::Join ), 2U );
    ASSERT_TRUE( s.turn.has_value() );
}

TEST( Encoder, GotoBDeclareGuard )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    const auto text = io::emit_mcmt( s, encoder::encode_goal( s, p, *p.goal ) );
    const auto at = text.find( ":comment declare-P0:gotoB@Att" );
    ASSERT_NE( at, std::string::npos );
    const auto g = text.find( ":guard", at );
    const auto line = text.substr( g, text.find( '\n', g ) - g );
    for ( const char* part : { "(= phase P0)", "(= actATT[x] Nop_Action)", "(= locATT[x] init)",
                               "(= destroyedATT[x] FALSE)", "(not (= pulseLoc B))", "(not (Snow init B))" } )
        EXPECT_NE( line.find( part ), std::string::npos ) << part;
}

TEST( Encoder, PreconditionTranslation )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    const int env = p.env_template();
    const auto* blastA = p.find_action( env, "blastA" );
    const auto t = encoder::translate_agent_formula( s, p, blastA->pre, encoder::SelfBinding::env(), 0 );
    ASSERT_FALSE( t.unsat );
    EXPECT_EQ( t.new_vars.size(), 1U );
    EXPECT_EQ( t.lits.size(), 2U );

    const int att = *p.find_template( "Att" );
    const auto* gotoA = p.find_action( att, "gotoA" );
    const auto u = encoder::translate_agent_formula( s, p, gotoA->pre, encoder::SelfBinding::at( 0 ), 1 );
    EXPECT_TRUE( u.new_vars.empty() );
    const auto pulse = Term::global( *s.sig.find_global( "pulseLoc" ) );
    const auto A = Term::constant( *s.sig.find_constant( "A" ) );
    const auto init = Term::constant( *s.sig.find_constant( "init" ) );
    EXPECT_NE( std::find( u.lits.begin(), u.lits.end(), Literal::neq( pulse, A ) ), u.lits.end() );
    EXPECT_NE( std::find( u.lits.begin(), u.lits.end(), Literal::app( *s.sig.find_relation( "Snow" ), { init, A }, false ) ),
               u.lits.end() );

    model::AgentFormula top;
    const auto e = encoder::translate_agent_formula( s, p, top, encoder::SelfBinding::env(), 0 );
    EXPECT_TRUE( e.lits.empty() );
    EXPECT_TRUE( e.new_vars.empty() );
}

TEST( Encoder, ConcurrentLocalGateIsUniversal )
{
    const auto p = model::parse_pmas( kOneAction );
    const auto s = encoder::encode_concurrent( p );
    const encoder::TransitionRule* gate = nullptr;
    for ( const auto& r : s.rules )
        if ( r.kind == StepKind::LocalGate )
            gate = &r;
    ASSERT_NE( gate, nullptr );
    ASSERT_EQ( gate->uguards.size(), 1U );
    const auto& ug = gate->uguards[0];
    ASSERT_EQ( ug.vars.size(), 1U );
    const VarId j = static_cast<VarId>( gate->vars.size() );
    const auto& ts = s.templates[0];
    const auto c0 = Term::constant( s.values[0][0] );
    const auto expected = Formula::disj( { Formula::literal( Literal::neq( Term::read( ts.act, j ), Term::constant( s.nop ) ) ),
                                           Formula::literal( Literal::neq( Term::read( ts.arrays[0], j ), c0 ) ) } );
    std::vector<SortId> vars = gate->vars;
    vars.push_back( ug.vars[0] );
    const auto differ = Formula::disj( { Formula::conj( { ug.matrix, Formula::negate( expected ) } ),
                                         Formula::conj( { Formula::negate( ug.matrix ), expected } ) } );
    EXPECT_FALSE( sat( s.sig, vars, differ ) );
    bool to_pl2 = false;
    for ( const auto& [lhs, rhs] : gate->assigns )
        to_pl2 |= lhs == Term::global( s.phase ) && rhs == Term::constant( s.phase_const( "PL2" ) );
    EXPECT_TRUE( to_pl2 );
}

TEST( Encoder, GoalCubes )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    const auto one = encoder::encode_goal( s, p, *p.goal );
    ASSERT_EQ( one.cubes.size(), 1U );
    EXPECT_EQ( to_string( s.sig, one.cubes[0] ), "exists z1:IdAtt. locATT[z1] = target" );

    const auto two = encoder::encode_goal( s, p, model::parse_goal( p, "loc[j1] = target and loc[j2] = target and j1 != j2" ) );
    ASSERT_EQ( two.cubes.size(), 1U );
    EXPECT_EQ( two.cubes[0].vars.size(), 2U );
    EXPECT_EQ( two.cubes[0].lits.size(), 2U );

    // without the disequality both index patterns appear
    const auto free = encoder::encode_goal( s, p, model::parse_goal( p, "loc[j1] = target and loc[j2] = target" ) );
    ASSERT_EQ( free.cubes.size(), 2U );
    EXPECT_NE( free.cubes[0].vars.size(), free.cubes[1].vars.size() );

    model::AgentFormula bottom{ model::FNode::bottom(), {}, {} };
    EXPECT_TRUE( encoder::encode_goal( s, p, bottom ).is_false() );
}

TEST( Encoder, GuardsAreWellTypedCubes )
{
    std::vector<std::string> texts{ fixture( "cannon.pmas" ), fixture( "trains.pmas" ), fixture( "crossindex.pmas" ) };
    for ( unsigned seed = 1; seed <= 30; ++seed )
        texts.push_back( oracle::random_pmas( seed ) );
    for ( const auto& text : texts )
        for ( auto sem : { Semantics::Interleaved, Semantics::Concurrent } )
        {
            const auto p = model::parse_pmas( text );
            const auto s = encoder::encode( p, sem );
            for ( const auto& r : s.rules )
            {
                for ( const auto& l : r.guard )
                    EXPECT_NO_THROW( check_literal( s.sig, r.vars, l ) ) << r.label;
                for ( const auto& ug : r.uguards )
                {
                    auto vars = r.vars;
                    vars.insert( vars.end(), ug.vars.begin(), ug.vars.end() );
                    EXPECT_NO_THROW( check_formula( s.sig, vars, ug.matrix ) ) << r.label;
                }
            }
        }
}

TEST( Encoder, BulkCasesAreExclusive )
{
    std::vector<std::string> texts{ fixture( "cannon.pmas" ), fixture( "trains.pmas" ) };
    for ( unsigned seed = 1; seed <= 30; ++seed )
        texts.push_back( oracle::random_pmas( seed ) );
    std::size_t pairs = 0;
    for ( const auto& text : texts )
        for ( auto sem : { Semantics::Interleaved, Semantics::Concurrent } )
        {
            const auto p = model::parse_pmas( text );
            const auto s = encoder::encode( p, sem );
            for ( const auto& r : s.rules )
                for ( const auto& b : r.bulk )
                {
                    auto vars = r.vars;
                    const auto j = static_cast<VarId>( vars.size() );
                    vars.push_back( s.sig.array( b.array ).index );
                    // the case list ends with `otherwise`, so it is exhaustive by shape
                    ASSERT_EQ( b.guards.size(), b.values.size() );
                    for ( std::size_t i = 0; i < b.guards.size(); ++i )
                    {
                        EXPECT_TRUE( sat( s.sig, vars, bind( b.guards[i], j ) ) ) << r.label;
                        for ( std::size_t k = i + 1; k < b.guards.size(); ++k, ++pairs )
                            EXPECT_FALSE( sat( s.sig, vars, Formula::conj( { bind( b.guards[i], j ), bind( b.guards[k], j ) } ) ) )
                                << r.label << " cases " << i << "," << k;
                    }
                }
        }
    EXPECT_GT( pairs, 10U );
}

TEST( Encoder, DifferentiateSplitsFreeVariables )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    const auto s = encoder::encode_interleaved( p );
    const auto att = s.templates[*p.find_template( "Att" )];
    Cube c{ { att.index, att.index }, { Literal::eq( Term::read( att.arrays[0], 0 ), Term::constant( *s.sig.find_constant( "A" ) ) ),
                                        Literal::eq( Term::read( att.arrays[0], 1 ), Term::constant( *s.sig.find_constant( "A" ) ) ) } };
    const auto parts = encoder::differentiate( s.sig, c );
    ASSERT_EQ( parts.size(), 2U );
    std::set<std::size_t> sizes;
    for ( const auto& d : parts )
        sizes.insert( d.vars.size() );
    EXPECT_EQ( sizes, ( std::set<std::size_t>{ 1, 2 } ) );
}
