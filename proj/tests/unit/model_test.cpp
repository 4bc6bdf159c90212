#include "parasafe/model/eval.hpp"
#include "parasafe/model/parser.hpp"
#include "parasafe/oracle/oracle.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace parasafe;
using namespace parasafe::model;

namespace
{

std::string fixture( const std::string& name )
{
    std::ifstream in( std::string( PARASAFE_FIXTURES ) + "/" + name );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_message( const std::string& text )
{
    try
    {
        (void)parse_pmas( text );
    }
    catch ( const ParseError& e )
    {
        return e.diagnostics().front().message;
    }
    return {};
}

// Independent evaluator: explicit groundings of every index variable.
int value_of( const Pmas& p, const Snapshot& g, const ATerm& t, const std::vector<AgentRef>& bind,
              std::optional<AgentRef> self )
{
    if ( t.kind == ATerm::Kind::Const )
        return t.value;
    AgentRef who{ p.env_template(), 0 };
    if ( t.at.kind == IndexRef::Kind::Var )
        who = bind[t.at.var];
    else if ( t.at.kind == IndexRef::Kind::Self )
        who = *self;
    return g.agents[who.tmpl][who.index].vals[p.slot( t.var )];
}

AgentRef ref_of( const Pmas& p, IndexRef r, const std::vector<AgentRef>& bind, std::optional<AgentRef> self )
{
    if ( r.kind == IndexRef::Kind::Var )
        return bind[r.var];
    if ( r.kind == IndexRef::Kind::Self )
        return *self;
    return { p.env_template(), 0 };
}

bool naive( const Pmas& p, const Snapshot& g, const RelInterpretation& I, const FNode& f,
            const std::vector<AgentRef>& bind, std::optional<AgentRef> self )
{
    switch ( f.kind )
    {
    case FNode::Kind::True:
        return true;
    case FNode::Kind::False:
        return false;
    case FNode::Kind::Eq:
        return value_of( p, g, f.terms[0], bind, self ) == value_of( p, g, f.terms[1], bind, self );
    case FNode::Kind::Rel:
    {
        std::vector<int> args;
        for ( const auto& t : f.terms )
            args.push_back( value_of( p, g, t, bind, self ) );
        return I.holds( f.rel, args );
    }
    case FNode::Kind::IdxEq:
    {
        const auto a = ref_of( p, f.a, bind, self );
        const auto b = ref_of( p, f.b, bind, self );
        return a.tmpl == b.tmpl && a.index == b.index;
    }
    case FNode::Kind::Not:
        return !naive( p, g, I, f.kids[0], bind, self );
    case FNode::Kind::And:
        for ( const auto& k : f.kids )
            if ( !naive( p, g, I, k, bind, self ) )
                return false;
        return true;
    case FNode::Kind::Or:
        for ( const auto& k : f.kids )
            if ( naive( p, g, I, k, bind, self ) )
                return true;
        return false;
    }
    return false;
}

bool naive_exists( const Pmas& p, const Snapshot& g, const RelInterpretation& I, const AgentFormula& f,
                   std::vector<AgentRef>& bind, std::optional<AgentRef> self )
{
    const auto k = bind.size();
    if ( k == f.index_names.size() )
        return naive( p, g, I, f.root, bind, self );
    const int t = f.index_owner[k];
    for ( std::size_t i = 0; i < g.agents[t].size(); ++i )
    {
        bind.push_back( { t, static_cast<int>( i ) } );
        const bool ok = naive_exists( p, g, I, f, bind, self );
        bind.pop_back();
        if ( ok )
            return true;
    }
    return false;
}

Snapshot random_snapshot( const Pmas& p, std::mt19937& rng )
{
    std::vector<int> counts( p.templates.size() );
    for ( auto& c : counts )
        c = std::uniform_int_distribution<int>( 0, 2 )( rng );
    auto g = initial_snapshot( p, counts );
    for ( std::size_t t = 0; t < p.templates.size(); ++t )
        for ( auto& a : g.agents[t] )
            for ( std::size_t s = 0; s < a.vals.size(); ++s )
            {
                const auto& sort = p.sorts[p.vars[p.templates[t].vars[s]].sort];
                a.vals[s] = std::uniform_int_distribution<int>( 0, static_cast<int>( sort.values.size() ) - 1 )( rng );
            }
    return g;
}

} // namespace

TEST( Parser, CannonModel )
{
    const auto p = parse_pmas( fixture( "cannon.pmas" ) );
    EXPECT_EQ( p.templates.size(), 2U );
    EXPECT_EQ( p.relations.size(), 1U );
    EXPECT_TRUE( p.alternation.has_value() );
    EXPECT_TRUE( validate_pmas( p ).empty() );
    const int att = *p.find_template( "Att" );
    EXPECT_EQ( p.templates[att].vars.size(), 2U );
    EXPECT_EQ( p.templates[att].actions.size(), 6U );
    EXPECT_EQ( p.env_template(), *p.find_template( "Cannon" ) );
    EXPECT_EQ( p.sync_actions(), ( std::vector<std::string>{ "blastA", "blastB" } ) );
    ASSERT_TRUE( p.goal.has_value() );
}

TEST( Parser, TemplateWithoutActions )
{
    const auto msg = first_message( "sort S { a, b }\n"
                                    "template T { var v: S = a }\n"
                                    "template E env { }\n" );
    EXPECT_NE( msg.find( "non-empty, finite set of action symbols" ), std::string::npos ) << msg;
}

TEST( Parser, UndeclaredConstantInEffectIsPositioned )
{
    const std::string text = "sort S { a, b }\n"
                             "template T {\n"
                             "  var v: S = a\n"
                             "  action m : local { pre: true; eff: v := zzz; }\n"
                             "}\n"
                             "template E env { }\n";
    try
    {
        (void)parse_pmas( text );
        FAIL() << "accepted";
    }
    catch ( const ParseError& e )
    {
        ASSERT_FALSE( e.diagnostics().empty() );
        EXPECT_EQ( e.diagnostics().front().pos.line, 4 );
        EXPECT_GT( e.diagnostics().front().pos.column, 30 );
        EXPECT_NE( e.diagnostics().front().message.find( "zzz" ), std::string::npos );
    }
}

TEST( Parser, SharedVariableNames )
{
    const auto msg = first_message( "sort S { a, b }\n"
                                    "template T { var loc: S = a\n action m : local { pre: true; eff: ; } }\n"
                                    "template U { var loc: S = b\n action n : local { pre: true; eff: ; } }\n"
                                    "template E env { }\n" );
    EXPECT_NE( msg.find( "disjoint" ), std::string::npos ) << msg;
}

TEST( Parser, SyncWithoutEnvironment )
{
    const auto msg = first_message( "sort S { a, b }\n"
                                    "template T { var v: S = a\n action hello : sync { pre: true; eff: v := b; } }\n"
                                    "template E env { }\n" );
    EXPECT_NE( msg.find( "environment" ), std::string::npos ) << msg;
}

TEST( Parser, SelfInGoalRejected )
{
    const auto p = parse_pmas( fixture( "cannon.pmas" ) );
    EXPECT_THROW( (void)parse_goal( p, "loc[self] = target" ), ParseError );
    EXPECT_THROW( (void)parse_goal( p, "loc[j] = pulseLoc[j]" ), ParseError );
}

TEST( Parser, PrintedModelsReparse )
{
    std::vector<std::string> texts{ fixture( "cannon.pmas" ), fixture( "trains.pmas" ), fixture( "crossindex.pmas" ) };
    for ( unsigned seed = 1; seed <= 40; ++seed )
        texts.push_back( oracle::random_pmas( seed ) );
    for ( const auto& t : texts )
    {
        const auto p = parse_pmas( t );
        const auto printed = print_pmas( p );
        const auto q = parse_pmas( printed );
        EXPECT_EQ( print_pmas( q ), printed );
        ASSERT_TRUE( q.goal.has_value() );
        EXPECT_EQ( *q.goal, *p.goal );
    }
}

TEST( Eval, GroundingWithSelf )
{
    const auto p = parse_pmas( "sort Num { five, six }\n"
                               "template T { var v1: Num = five\n action m : local { pre: true; eff: ; } }\n"
                               "template E env { }\n" );
    auto g = initial_snapshot( p, { 2, 1 } );
    g.agents[0][0] = { 3, { 1 } }; // v1 = six
    g.agents[0][1] = { 7, { 0 } }; // v1 = five
    AgentFormula f = parse_goal( p, "v1[j] = five" );
    // self-bearing formula built by hand: v1[self] = six and v1[j] = five
    AgentFormula h = f;
    h.root = FNode::conj( { FNode::eq( ATerm::read( *p.find_var( "v1" ), IndexRef::self() ), ATerm::constant( 0, 1 ) ),
                            f.root } );
    const auto I = empty_interpretation( p );
    EXPECT_TRUE( eval_agent_formula( p, g, I, h, AgentRef{ 0, 0 } ) );
    EXPECT_FALSE( eval_agent_formula( p, g, I, h, AgentRef{ 0, 1 } ) );
    EXPECT_TRUE( eval_agent_formula( p, g, I, parse_goal( p, "v1[j] = six and j = j" ) ) );
    AgentFormula reflexive{ FNode::idx_eq( IndexRef::variable( 0 ), IndexRef::variable( 0 ) ), { "j" }, { 0 } };
    EXPECT_TRUE( eval_agent_formula( p, g, I, reflexive ) );
}

TEST( Eval, SnowBlocksGotoA )
{
    const auto p = parse_pmas( fixture( "cannon.pmas" ) );
    const auto g = initial_snapshot( p, { 1, 1 } );
    const int att = *p.find_template( "Att" );
    const auto* gotoA = p.find_action( att, "gotoA" );
    ASSERT_NE( gotoA, nullptr );
    EXPECT_TRUE( eval_agent_formula( p, g, empty_interpretation( p ), gotoA->pre, AgentRef{ att, 0 } ) );
    const auto snow = parse_interpretation( p, "Snow(init, A)\n" );
    EXPECT_FALSE( eval_agent_formula( p, g, snow, gotoA->pre, AgentRef{ att, 0 } ) );
}

TEST( Eval, MatchesExplicitGroundings )
{
    std::mt19937 rng( 5 );
    int checked = 0;
    for ( unsigned seed = 1; seed <= 60; ++seed )
    {
        const auto p = parse_pmas( oracle::random_pmas( seed ) );
        const auto interps = oracle::interpretations( p, 8, seed );
        for ( int k = 0; k < 10; ++k )
        {
            const auto g = random_snapshot( p, rng );
            const auto& I = interps[k % interps.size()];
            std::vector<AgentRef> bind;
            ASSERT_EQ( eval_agent_formula( p, g, I, *p.goal ), naive_exists( p, g, I, *p.goal, bind, std::nullopt ) );
            for ( std::size_t t = 0; t < p.templates.size(); ++t )
                for ( const auto& a : p.templates[t].actions )
                    for ( std::size_t i = 0; i < g.agents[t].size(); ++i )
                    {
                        const AgentRef self{ static_cast<int>( t ), static_cast<int>( i ) };
                        bind.clear();
                        ASSERT_EQ( eval_agent_formula( p, g, I, a.pre, self ), naive_exists( p, g, I, a.pre, bind, self ) );
                        ++checked;
                    }
        }
    }
    EXPECT_GT( checked, 500 );
}

TEST( Eval, MonotoneUnderExtraAgents )
{
    const auto p = parse_pmas( fixture( "trains.pmas" ) );
    std::mt19937 rng( 9 );
    const auto I = empty_interpretation( p );
    for ( int k = 0; k < 200; ++k )
    {
        auto g = random_snapshot( p, rng );
        if ( !eval_agent_formula( p, g, I, *p.goal ) )
            continue;
        auto bigger = g;
        auto extra = random_snapshot( p, rng );
        for ( std::size_t t = 0; t < p.templates.size(); ++t )
            if ( static_cast<int>( t ) != p.env_template() )
                for ( auto a : extra.agents[t] )
                {
                    a.id += 100;
                    bigger.agents[t].push_back( a );
                }
        EXPECT_TRUE( eval_agent_formula( p, bigger, I, *p.goal ) );
    }
}

TEST( Interpretation, ParsesTuples )
{
    const auto p = parse_pmas( fixture( "cannon.pmas" ) );
    const auto I = parse_interpretation( p, "# snow\nSnow(init, A)\nSnow(B, target)\n" );
    const int A = p.find_constant( "A" )->second;
    const int init = p.find_constant( "init" )->second;
    EXPECT_TRUE( I.holds( 0, { init, A } ) );
    EXPECT_FALSE( I.holds( 0, { A, init } ) );
    EXPECT_THROW( (void)parse_interpretation( p, "Rain(A, B)\n" ), ParseError );
}
