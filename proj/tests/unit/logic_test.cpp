#include "absem.hpp"

#include "parasafe/logic/errors.hpp"
#include "parasafe/logic/euf.hpp"
#include "parasafe/logic/reduce.hpp"
#include "parasafe/logic/solver.hpp"

#include <gtest/gtest.h>

using namespace parasafe;
using namespace parasafe::logic;
using parasafe::testing::AbState;
using parasafe::testing::Env;

namespace
{

struct Small
{
    Signature sig;
    SortId idx;
    SortId loc;
    ConstId A, B, C;
    RelId R;
    GlobalId x, y, z;
    ArrayId a;

    Small()
    {
        idx = sig.add_sort( "I", SortKind::Index );
        loc = sig.add_sort( "L", SortKind::Element, { "A", "B", "C" } );
        A = *sig.find_constant( "A" );
        B = *sig.find_constant( "B" );
        C = *sig.find_constant( "C" );
        R = sig.add_relation( "R", { loc, loc } );
        x = sig.add_global( "x", loc );
        y = sig.add_global( "y", loc );
        z = sig.add_global( "z", loc );
        a = sig.add_array( "a", idx, loc );
    }
};

Formula lit( Literal l ) { return Formula::literal( std::move( l ) ); }

} // namespace

TEST( CongruenceClosure, RepeatedEqualityIsSat )
{
    Small s;
    Cube c{ {}, { Literal::eq( Term::global( s.x ), Term::constant( s.A ) ),
                  Literal::eq( Term::global( s.x ), Term::constant( s.A ) ) } };
    EXPECT_TRUE( euf_sat_cube( c, s.sig ) );
}

TEST( CongruenceClosure, DistinctConstantsClash )
{
    Small s;
    Cube c{ {}, { Literal::eq( Term::global( s.x ), Term::constant( s.A ) ),
                  Literal::eq( Term::global( s.x ), Term::constant( s.B ) ) } };
    EXPECT_FALSE( euf_sat_cube( c, s.sig ) );
}

TEST( CongruenceClosure, CongruenceOnRelationArguments )
{
    Small s;
    const auto X = Term::global( s.x );
    const auto Y = Term::global( s.y );
    const auto Z = Term::global( s.z );
    Cube c{ {}, { Literal::app( s.R, { X, Y } ), Literal::app( s.R, { Z, Y }, false ), Literal::eq( X, Z ) } };
    EXPECT_FALSE( euf_sat_cube( c, s.sig ) );
    c.lits.pop_back();
    EXPECT_TRUE( euf_sat_cube( c, s.sig ) );
}

TEST( CongruenceClosure, OpenDomainAllowsAFourthValue )
{
    Small s;
    const auto X = Term::global( s.x );
    Cube c{ {}, { Literal::neq( X, Term::constant( s.A ) ), Literal::neq( X, Term::constant( s.B ) ),
                  Literal::neq( X, Term::constant( s.C ) ) } };
    EXPECT_TRUE( euf_sat_cube( c, s.sig ) );
}

TEST( CongruenceClosure, IndexVariablesAreDistinct )
{
    Small s;
    Cube c{ { s.idx, s.idx }, { Literal::eq( Term::var( 0 ), Term::var( 1 ) ) } };
    EXPECT_FALSE( euf_sat_cube( c, s.sig ) );
    c.lits = { Literal::eq( Term::read( s.a, 0 ), Term::read( s.a, 1 ) ) };
    EXPECT_TRUE( euf_sat_cube( c, s.sig ) );
}

TEST( CongruenceClosure, IllTypedLiteralThrows )
{
    Small s;
    Cube c{ { s.idx }, { Literal::eq( Term::var( 0 ), Term::constant( s.A ) ) } };
    EXPECT_THROW( (void)euf_sat_cube( c, s.sig ), IllTypedError );
}

TEST( CongruenceClosure, AgreesWithBruteForceOnRandomCubes )
{
    std::mt19937 rng( 7 );
    int sat = 0;
    for ( int i = 0; i < 150; ++i )
    {
        auto rs = parasafe::testing::random_signature( rng, 1 + i % 3, 3, i % 3, 1 + i % 2, 1 + ( i / 2 ) % 2 );
        auto c = parasafe::testing::random_ground_cube( rng, rs, 2, 5 );
        const bool expect = parasafe::testing::brute_sat_cube( rs.sig, c );
        ASSERT_EQ( euf_sat_cube( c, rs.sig ), expect ) << "cube " << i;
        sat += expect ? 1 : 0;
    }
    EXPECT_GT( sat, 20 );
    EXPECT_LT( sat, 140 );
}

TEST( ExistsForall, TrivialExistential )
{
    Small s;
    EXPECT_TRUE( sat_exists_forall( s.sig, EFFormula{ { s.idx }, {}, Formula::top() } ) );
}

TEST( ExistsForall, SingletonModel )
{
    Small s;
    EFFormula f{ { s.idx }, { s.idx }, lit( Literal::eq( Term::var( 1 ), Term::var( 0 ) ) ) };
    EXPECT_TRUE( sat_exists_forall( s.sig, f ) );
}

TEST( ExistsForall, UniversalContradictsWitness )
{
    Signature sig;
    const auto idx = sig.add_sort( "I", SortKind::Index );
    const auto boole = sig.add_sort( "Bool", SortKind::Element, { "T", "F" } );
    const auto a = sig.add_array( "a", idx, boole );
    const auto T = Term::constant( *sig.find_constant( "T" ) );
    const auto F = Term::constant( *sig.find_constant( "F" ) );
    EFFormula f{ { idx, idx },
                 { idx },
                 Formula::conj( { lit( Literal::neq( Term::var( 0 ), Term::var( 1 ) ) ),
                                  lit( Literal::eq( Term::read( a, 0 ), T ) ), lit( Literal::eq( Term::read( a, 1 ), F ) ),
                                  lit( Literal::eq( Term::read( a, 2 ), T ) ) } ) };
    EXPECT_FALSE( sat_exists_forall( sig, f ) );
    EXPECT_FALSE( parasafe::testing::brute_sat_ef( sig, f ) );
}

TEST( ExistsForall, AgreesWithBruteForceOnRandomFormulas )
{
    std::mt19937 rng( 11 );
    int sat = 0;
    for ( int i = 0; i < 120; ++i )
    {
        auto rs = parasafe::testing::random_signature( rng, 2, 2, i % 2, 1, 1 );
        auto f = parasafe::testing::random_ef( rng, rs, 3, 2 );
        const bool expect = parasafe::testing::brute_sat_ef( rs.sig, f );
        ASSERT_EQ( sat_exists_forall( rs.sig, f ), expect ) << "formula " << i;
        sat += expect ? 1 : 0;
    }
    EXPECT_GT( sat, 10 );
    EXPECT_LT( sat, 110 );
}

TEST( Partitions, CountsAreBellNumbers )
{
    const std::size_t bell[] = { 1, 1, 2, 5, 15, 52, 203 };
    for ( std::size_t n = 0; n <= 6; ++n )
        EXPECT_EQ( alldiff_partitions( std::vector<SortId>( n, 0 ) ).size(), bell[n] ) << n;
    // blocks never mix sorts
    EXPECT_EQ( alldiff_partitions( { 0, 1, 0, 1 } ).size(), 4U );
}

TEST( Partitions, RepresentativeIsSmallestMember )
{
    for ( const auto& rep : alldiff_partitions( { 0, 0, 0 } ) )
        for ( VarId v = 0; v < rep.size(); ++v )
        {
            EXPECT_LE( rep[v], v );
            EXPECT_EQ( rep[rep[v]], rep[v] );
        }
}

TEST( SortMatching, InjectiveAndFree )
{
    EXPECT_EQ( sort_matching_maps( { 0, 0 }, { 0, 0, 0 }, true ).size(), 6U );
    EXPECT_EQ( sort_matching_maps( { 0, 0 }, { 0, 0, 0 }, false ).size(), 9U );
    EXPECT_EQ( sort_matching_maps( { 0, 1 }, { 0, 1, 1 }, true ).size(), 2U );
    EXPECT_TRUE( sort_matching_maps( { 0, 0 }, { 0 }, true ).empty() );
}

TEST( Reduce, ConstantLambda )
{
    Small s;
    // (lambda y. A)(v0) = x
    auto applied = UExpr::apply( UExpr::plain( Term::constant( s.A ) ), Term::var( 0 ) );
    auto f = reduce_updates( s.sig, { s.idx }, UFormula::eq( applied, UExpr::plain( Term::global( s.x ) ) ) );
    ASSERT_EQ( f.kind, Formula::Kind::Lit );
    EXPECT_EQ( f.lit, Literal::eq( Term::constant( s.A ), Term::global( s.x ) ) );
}

namespace
{

// Truth-table equivalence over every value of x, y, z and a[0], a[1].
template <typename Fn>
void expect_equivalent( const Small& s, const Formula& f, Fn expected )
{
    const ConstId values[] = { s.A, s.B, s.C };
    AbState st;
    st.index_count = { 2, 0 };
    st.globals.assign( 3, 0 );
    st.arrays.assign( 1, std::vector<parasafe::testing::Value>( 2, 0 ) );
    Env env{ { 0, 0 }, { 1, 1 } };
    for ( auto vx : values )
        for ( auto vy : values )
            for ( auto vz : values )
                for ( auto a0 : values )
                    for ( auto a1 : values )
                    {
                        st.globals = { vx, vy, vz };
                        st.arrays[0] = { a0, a1 };
                        ASSERT_EQ( parasafe::testing::eval( st, env, f ), expected( vx, vy, vz, a0, a1 ) );
                    }
}

} // namespace

TEST( Reduce, CaseAtomDistributes )
{
    Small s;
    const auto X = Term::global( s.x );
    auto kappa = UFormula::lift( Literal::eq( X, Term::constant( s.A ) ) );
    auto F = UExpr::cases( { kappa, UFormula::negate( kappa ) },
                           { UExpr::plain( Term::constant( s.B ) ), UExpr::plain( Term::global( s.y ) ) }, false );
    auto f = reduce_updates( s.sig, { s.idx, s.idx }, UFormula::eq( F, UExpr::plain( Term::global( s.z ) ) ) );
    expect_equivalent( s, f, [&]( auto vx, auto vy, auto vz, auto, auto ) {
        return vx == s.A ? vz == s.B : vz == vy;
    } );
}

TEST( Reduce, NestedCasesFlattenToFourWays )
{
    Small s;
    const auto X = Term::global( s.x );
    const auto Y = Term::global( s.y );
    auto k1 = UFormula::lift( Literal::eq( X, Term::constant( s.A ) ) );
    auto k2 = UFormula::lift( Literal::eq( Y, Term::constant( s.B ) ) );
    auto inner1 = UExpr::cases( { k2, UFormula::negate( k2 ) },
                                { UExpr::plain( Term::constant( s.A ) ), UExpr::plain( Term::constant( s.B ) ) }, false );
    auto inner2 = UExpr::cases( { k2 }, { UExpr::plain( Term::constant( s.C ) ), UExpr::plain( Term::read( s.a, 1 ) ) },
                                true );
    auto outer = UExpr::cases( { k1, UFormula::negate( k1 ) }, { inner1, inner2 }, false );
    auto f = reduce_updates( s.sig, { s.idx, s.idx }, UFormula::eq( outer, UExpr::plain( Term::global( s.z ) ) ) );
    auto cubes = dnf( f );
    EXPECT_GE( cubes.size(), 4U );
    expect_equivalent( s, f, [&]( auto vx, auto vy, auto vz, auto, auto a1 ) {
        if ( vx == s.A )
            return vz == ( vy == s.B ? s.A : s.B );
        return vz == ( vy == s.B ? s.C : a1 );
    } );
}

TEST( Reduce, LambdaArrayUpdateAtAVariable )
{
    Small s;
    // a' = lambda j. case { a[j] = A : B ; else a[j] } read at v1, compared with x
    auto guard = UFormula::lift( Literal::eq( Term::read( s.a, kBoundVar ), Term::constant( s.A ) ) );
    auto body = UExpr::cases( { guard }, { UExpr::plain( Term::constant( s.B ) ), UExpr::plain( Term::read( s.a, kBoundVar ) ) },
                              true );
    auto f = reduce_updates( s.sig, { s.idx, s.idx },
                             UFormula::eq( UExpr::apply( body, Term::var( 1 ) ), UExpr::plain( Term::global( s.x ) ) ) );
    expect_equivalent( s, f, [&]( auto vx, auto, auto, auto, auto a1 ) { return vx == ( a1 == s.A ? s.B : a1 ); } );
}

TEST( Reduce, NonExhaustiveCaseIsRejected )
{
    Small s;
    auto k = UFormula::lift( Literal::eq( Term::global( s.x ), Term::constant( s.A ) ) );
    auto F = UExpr::cases( { k }, { UExpr::plain( Term::constant( s.B ) ) }, false );
    EXPECT_THROW( (void)reduce_updates( s.sig, {}, UFormula::eq( F, UExpr::plain( Term::global( s.y ) ) ) ),
                  EncodingError );
}

TEST( Dnf, DistributesAndCaps )
{
    Small s;
    auto p = lit( Literal::eq( Term::global( s.x ), Term::constant( s.A ) ) );
    auto q = lit( Literal::eq( Term::global( s.y ), Term::constant( s.A ) ) );
    auto r = lit( Literal::eq( Term::global( s.z ), Term::constant( s.A ) ) );
    EXPECT_EQ( dnf( Formula::conj( { Formula::disj( { p, q } ), r } ) ).size(), 2U );
    EXPECT_TRUE( dnf( Formula::bottom() ).empty() );
    ASSERT_EQ( dnf( Formula::top() ).size(), 1U );
    std::vector<Formula> wide;
    for ( VarId v = 0; v < 12; ++v )
        wide.push_back( Formula::disj( { lit( Literal::eq( Term::read( s.a, v ), Term::constant( s.A ) ) ),
                                         lit( Literal::eq( Term::read( s.a, v ), Term::constant( s.B ) ) ) } ) );
    EXPECT_THROW( (void)dnf( Formula::conj( wide ), 1000 ), BudgetExceeded );
}
