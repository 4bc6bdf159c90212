#include "absem.hpp"

#include "parasafe/encoder/encoder.hpp"
#include "parasafe/engine/analysis.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/engine/preimage.hpp"
#include "parasafe/io/mcmt.hpp"
#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/solver.hpp"
#include "parasafe/model/parser.hpp"
#include "parasafe/oracle/oracle.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace parasafe;
using namespace parasafe::logic;
using encoder::StepKind;
using engine::Verdict;

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

struct Loaded
{
    model::Pmas p;
    encoder::AbPmas s;
    StateFormula goal;
};

Loaded load( const std::string& text, encoder::Semantics sem = encoder::Semantics::Interleaved )
{
    Loaded l{ model::parse_pmas( text ), {}, {} };
    l.s = encoder::encode( l.p, sem );
    l.goal = encoder::encode_goal( l.s, l.p, *l.p.goal );
    return l;
}

// Pairwise distinctness of same-sort variables in [first, first+sorts.size()).
std::vector<Formula> distinct( const Signature& sig, const std::vector<SortId>& sorts, VarId first )
{
    std::vector<Formula> out;
    for ( VarId a = 0; a < sorts.size(); ++a )
        for ( VarId b = a + 1; b < sorts.size(); ++b )
            if ( sorts[a] == sorts[b] && sig.sort( sorts[a] ).kind == SortKind::Index )
                out.push_back( Formula::literal( Literal::neq( Term::var( first + a ), Term::var( first + b ) ) ) );
    return out;
}

Formula shifted( const Signature& sig, const Cube& c, VarId first )
{
    std::vector<VarId> map( c.vars.size() );
    for ( VarId v = 0; v < map.size(); ++v )
        map[v] = first + v;
    auto parts = distinct( sig, c.vars, first );
    for ( const auto& l : c.lits )
        parts.push_back( Formula::literal( rename( l, map ) ) );
    return Formula::conj( std::move( parts ) );
}

// Every model of a is a model of b, decided by the exists-forall solver.
bool implies( const Signature& sig, const StateFormula& a, const StateFormula& b )
{
    for ( const auto& ca : a.cubes )
    {
        EFFormula ef;
        ef.exists = ca.vars;
        std::vector<Formula> parts{ shifted( sig, ca, 0 ) };
        for ( const auto& cb : b.cubes )
        {
            const auto first = static_cast<VarId>( ef.exists.size() + ef.forall.size() );
            ef.forall.insert( ef.forall.end(), cb.vars.begin(), cb.vars.end() );
            parts.push_back( Formula::negate( shifted( sig, cb, first ) ) );
        }
        ef.matrix = Formula::conj( std::move( parts ) );
        if ( sat_exists_forall( sig, ef ) )
            return false;
    }
    return true;
}

bool equivalent( const Signature& sig, const StateFormula& a, const StateFormula& b )
{
    return implies( sig, a, b ) && implies( sig, b, a );
}

const encoder::TransitionRule& rule( const encoder::AbPmas& s, const std::string& label )
{
    for ( const auto& r : s.rules )
        if ( r.label == label )
            return r;
    throw std::out_of_range( label );
}

// Index counts for concretizing a cube: its variables per sort, plus `extra`.
std::vector<std::size_t> counts_for( const encoder::AbPmas& s, const Cube& c, std::size_t extra )
{
    std::vector<std::size_t> n( s.sig.sort_count(), 0 );
    for ( SortId so = 0; so < s.sig.sort_count(); ++so )
        if ( s.sig.sort( so ).kind == SortKind::Index )
            n[so] = extra;
    for ( auto v : c.vars )
        ++n[v];
    return n;
}

// Some successor under `r` of every sampled state of `pre` satisfies `post`.
std::size_t forward_check( const encoder::AbPmas& s, const encoder::TransitionRule& r, const Cube& pre,
                           const StateFormula& post, std::mt19937& rng, std::size_t extra )
{
    std::size_t checked = 0;
    for ( const auto& st : parasafe::testing::sample_states( s, pre, counts_for( s, pre, extra ), rng, 6 ) )
    {
        bool hit = false;
        for ( const auto& succ : parasafe::testing::step( s, r, st ) )
            hit = hit || parasafe::testing::holds( s.sig, succ, post );
        EXPECT_TRUE( hit ) << r.label;
        ++checked;
    }
    return checked;
}

} // namespace

TEST( Preimage, OfFalseIsFalse )
{
    const auto l = load( fixture( "cannon.pmas" ) );
    for ( const auto& r : l.s.rules )
        EXPECT_TRUE( engine::preimage( l.s, r, StateFormula{} ).is_false() );
}

TEST( Preimage, DeclareRule )
{
    const auto l = load( kOneAction );
    const auto& r = rule( l.s, "declare-P0:m@T" );
    const auto& sig = l.s.sig;
    const auto& ts = l.s.templates[0];
    const auto idx = ts.index;
    const auto phase = Term::global( l.s.phase );
    const auto P0 = Term::constant( l.s.phase_const( "P0" ) );
    const auto PL = Term::constant( l.s.phase_const( "PL" ) );
    const auto m = Term::constant( l.s.action_consts.at( "m" ) );
    const auto nop = Term::constant( l.s.nop );
    const auto c0 = Term::constant( l.s.values[0][0] );

    Cube phi{ { idx }, { Literal::eq( phase, PL ), Literal::eq( Term::read( ts.act, 0 ), m ) } };
    const auto out = engine::preimage( l.s, r, StateFormula{ { phi } } );

    Cube same{ { idx }, { Literal::eq( phase, P0 ), Literal::eq( Term::read( ts.act, 0 ), nop ),
                          Literal::eq( Term::read( ts.arrays[0], 0 ), c0 ) } };
    Cube other{ { idx, idx }, { Literal::eq( phase, P0 ), Literal::eq( Term::read( ts.act, 0 ), nop ),
                                Literal::eq( Term::read( ts.arrays[0], 0 ), c0 ), Literal::eq( Term::read( ts.act, 1 ), m ) } };
    EXPECT_EQ( out.cubes.size(), 2U );
    EXPECT_TRUE( equivalent( sig, out, StateFormula{ { same, other } } ) );
    EXPECT_FALSE( equivalent( sig, out, StateFormula{ { other } } ) );
}

TEST( Preimage, BulkCases )
{
    const auto l = load( kOneAction );
    const auto& r = rule( l.s, "bulk:idle" );
    const auto& ts = l.s.templates[0];
    const auto m = Term::constant( l.s.action_consts.at( "m" ) );
    const auto c1 = Term::constant( l.s.values[0][1] );
    Cube phi{ { ts.index }, { Literal::eq( Term::read( ts.arrays[0], 0 ), c1 ) } };
    const auto out = engine::preimage( l.s, r, StateFormula{ { phi } } );

    Cube took{ { ts.index }, r.guard };
    took.lits.push_back( Literal::eq( Term::read( ts.act, 0 ), m ) );
    Cube kept{ { ts.index }, r.guard };
    kept.lits.push_back( Literal::neq( Term::read( ts.act, 0 ), m ) );
    kept.lits.push_back( Literal::eq( Term::read( ts.arrays[0], 0 ), c1 ) );
    ASSERT_TRUE( r.vars.empty() );
    EXPECT_TRUE( equivalent( l.s.sig, out, StateFormula{ { took, kept } } ) );
}

TEST( Preimage, AgreesWithGenericReduction )
{
    std::mt19937 rng( 3 );
    std::size_t compared = 0;
    for ( unsigned seed = 1; seed <= 12; ++seed )
    {
        const auto l = load( oracle::random_pmas( seed ) );
        for ( int k = 0; k < 12; ++k )
        {
            const auto phi = parasafe::testing::random_state_formula( rng, l.s, 1, 2, 3 );
            if ( phi.cubes.empty() )
                continue;
            const auto& r = l.s.rules[rng() % l.s.rules.size()];
            const StateFormula fast{ engine::preimage( l.s, r, phi.cubes[0] ) };
            const StateFormula slow{ engine::preimage_by_reduction( l.s, r, phi.cubes[0] ) };
            EXPECT_EQ( fast.is_false(), slow.is_false() ) << r.label;
            for ( const auto& [from, to] : { std::pair{ &fast, &slow }, std::pair{ &slow, &fast } } )
                for ( const auto& c : from->cubes )
                    for ( const auto& st : parasafe::testing::sample_states( l.s, c, counts_for( l.s, c, 1 ), rng, 4 ) )
                        EXPECT_TRUE( parasafe::testing::holds( l.s.sig, st, *to ) ) << r.label;
            ++compared;
        }
    }
    EXPECT_GT( compared, 100U );
}

TEST( Preimage, StatesStepIntoTheTarget )
{
    std::mt19937 rng( 11 );
    std::size_t checked = 0;
    for ( unsigned seed = 1; seed <= 15; ++seed )
    {
        const auto l = load( oracle::random_pmas( seed ) );
        for ( int k = 0; k < 10; ++k )
        {
            const auto phi = parasafe::testing::random_state_formula( rng, l.s, 1, 2, 3 );
            const auto& r = l.s.rules[rng() % l.s.rules.size()];
            for ( const auto& c : engine::preimage( l.s, r, phi ).cubes )
                checked += forward_check( l.s, r, c, phi, rng, 1 );
        }
    }
    EXPECT_GT( checked, 50U );
}

TEST( Breach, GoalAtInitIsImmediate )
{
    const auto p = model::parse_pmas( kOneAction );
    const auto s = encoder::encode_interleaved( p );
    const auto v = engine::breach( s, encoder::encode_goal( s, p, model::parse_goal( p, "v[j] = c0" ) ) );
    EXPECT_EQ( v.kind, Verdict::Kind::Unsafe );
    EXPECT_EQ( v.depth, 0U );
    EXPECT_TRUE( v.trace.empty() );
    EXPECT_TRUE( engine::extract_run_template( v, s ).empty() );
}

TEST( Breach, CannonRunTemplate )
{
    const auto l = load( fixture( "cannon.pmas" ) );
    const auto v = engine::breach( l.s, l.goal );
    ASSERT_EQ( v.kind, Verdict::Kind::Unsafe );
    const auto tmpl = engine::extract_run_template( v, l.s );
    ASSERT_EQ( tmpl.size(), 4U );
    std::vector<std::string> texts;
    for ( const auto& step : tmpl )
        texts.push_back( step.text( l.p ) );
    EXPECT_EQ( texts[0].rfind( "pulse", 0 ), 0U ) << texts[0];
    EXPECT_EQ( texts[1].rfind( "goto", 0 ), 0U ) << texts[1];
    EXPECT_EQ( texts[2].rfind( "pulse", 0 ), 0U ) << texts[2];
    EXPECT_EQ( texts[3].rfind( "goTarget", 0 ), 0U ) << texts[3];
}

TEST( Breach, TrainsAreSafe )
{
    const auto l = load( fixture( "trains.pmas" ) );
    engine::Frontier f;
    const auto v = engine::breach( l.s, l.goal, {}, &f );
    ASSERT_EQ( v.kind, Verdict::Kind::Safe );
    // one more layer adds nothing
    std::vector<const Cube*> region;
    for ( const auto& fc : f.cubes )
        region.push_back( &fc.cube );
    for ( const auto& fc : f.cubes )
        for ( const auto& r : l.s.rules )
            for ( const auto& c : engine::preimage( l.s, r, fc.cube ) )
                EXPECT_TRUE( engine::entailed( l.s, c, region ) ) << r.label;
}

TEST( Breach, DepthBudget )
{
    const auto l = load( fixture( "cannon.pmas" ) );
    engine::Budgets b;
    b.max_depth = 1;
    const auto v = engine::breach( l.s, l.goal, b );
    EXPECT_EQ( v.kind, Verdict::Kind::Unknown );
    EXPECT_EQ( v.reason, Verdict::Reason::DepthBudget );
}

TEST( Breach, LayersAreSound )
{
    std::mt19937 rng( 17 );
    std::size_t checked = 0;
    for ( const char* name : { "cannon.pmas", "crossindex.pmas" } )
    {
        const auto l = load( fixture( name ) );
        engine::Frontier f;
        (void)engine::breach( l.s, l.goal, {}, &f );
        for ( const auto& fc : f.cubes )
        {
            if ( fc.layer == 0 )
                continue;
            const auto& parent = f.cubes[fc.parent].cube;
            checked += forward_check( l.s, l.s.rules[fc.rule], fc.cube, StateFormula{ { parent } }, rng, 1 );
        }
    }
    EXPECT_GT( checked, 20U );
}

TEST( Locality, CannonTerminates )
{
    const auto l = load( fixture( "cannon.pmas" ) );
    const auto rep = engine::check_locality( l.s, l.goal, l.p );
    EXPECT_TRUE( rep.goal_local );
    EXPECT_TRUE( rep.protocols_local() );
    EXPECT_TRUE( rep.guaranteed_termination );
}

TEST( Locality, CrossIndexGoal )
{
    const auto l = load( fixture( "crossindex.pmas" ) );
    const auto rep = engine::check_locality( l.s, l.goal, l.p );
    EXPECT_FALSE( rep.goal_local );
    EXPECT_FALSE( rep.guaranteed_termination );
}

TEST( Locality, SingleIndexCube )
{
    const auto l = load( kOneAction );
    const auto& ts = l.s.templates[0];
    Cube c{ { ts.index }, { Literal::eq( Term::read( ts.arrays[0], 0 ), Term::constant( l.s.values[0][1] ) ) } };
    EXPECT_TRUE( engine::cube_is_local( c ) );
    Cube cross{ { ts.index, ts.index }, { Literal::eq( Term::read( ts.arrays[0], 0 ), Term::read( ts.arrays[0], 1 ) ) } };
    EXPECT_FALSE( engine::cube_is_local( cross ) );
}

TEST( Witness, EngineTraceRoundTrips )
{
    for ( const char* name : { "cannon.pmas", "crossindex.pmas" } )
    {
        const auto l = load( fixture( name ) );
        const auto v = engine::breach( l.s, l.goal );
        ASSERT_EQ( v.kind, Verdict::Kind::Unsafe );
        std::vector<io::WitnessToken> tokens;
        for ( const auto& st : v.trace )
            tokens.push_back( { static_cast<int>( st.rule ) + 1, std::nullopt } );
        const auto text = io::format_mcmt_witness( tokens );
        const auto back = io::parse_mcmt_witness( text );
        ASSERT_EQ( back, tokens );
        const auto labels = io::mcmt_transition_labels( io::emit_mcmt( l.s, l.goal ) );
        for ( std::size_t i = 0; i < back.size(); ++i )
            EXPECT_EQ( labels.at( back[i].ordinal - 1 ), v.trace[i].label );
    }
}
