#include "parasafe/encoder/encoder.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/engine/preimage.hpp"
#include "parasafe/io/mcmt.hpp"
#include "parasafe/model/parser.hpp"
#include "parasafe/oracle/oracle.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace parasafe;

namespace
{

std::string fixture( const std::string& name )
{
    std::ifstream in( std::string( PARASAFE_FIXTURES ) + "/" + name );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded
{
    model::Pmas p;
    encoder::AbPmas s;
    logic::StateFormula goal;
};

Loaded load( const std::string& name, encoder::Semantics sem )
{
    Loaded l{ model::parse_pmas( fixture( name ) ), {}, {} };
    l.s = encoder::encode( l.p, sem );
    l.goal = encoder::encode_goal( l.s, l.p, *l.p.goal );
    return l;
}

void BM_ParseEncode( benchmark::State& st )
{
    const auto text = fixture( "cannon.pmas" );
    for ( auto _ : st )
        benchmark::DoNotOptimize( encoder::encode_interleaved( model::parse_pmas( text ) ) );
}
BENCHMARK( BM_ParseEncode );

void BM_BreachCannon( benchmark::State& st )
{
    const auto l = load( "cannon.pmas", encoder::Semantics::Interleaved );
    for ( auto _ : st )
        benchmark::DoNotOptimize( engine::breach( l.s, l.goal ) );
}
BENCHMARK( BM_BreachCannon )->Unit( benchmark::kMillisecond );

void BM_BreachCannonConcurrent( benchmark::State& st )
{
    const auto l = load( "cannon.pmas", encoder::Semantics::Concurrent );
    for ( auto _ : st )
        benchmark::DoNotOptimize( engine::breach( l.s, l.goal ) );
}
BENCHMARK( BM_BreachCannonConcurrent )->Unit( benchmark::kMillisecond );

void BM_BreachTrains( benchmark::State& st )
{
    const auto l = load( "trains.pmas", encoder::Semantics::Interleaved );
    for ( auto _ : st )
        benchmark::DoNotOptimize( engine::breach( l.s, l.goal ) );
}
BENCHMARK( BM_BreachTrains )->Unit( benchmark::kMillisecond );

void BM_PreimageAllRules( benchmark::State& st )
{
    const auto l = load( "cannon.pmas", encoder::Semantics::Interleaved );
    for ( auto _ : st )
        for ( const auto& r : l.s.rules )
            benchmark::DoNotOptimize( engine::preimage( l.s, r, l.goal ) );
}
BENCHMARK( BM_PreimageAllRules );

void BM_EmitMcmt( benchmark::State& st )
{
    const auto l = load( "cannon.pmas", encoder::Semantics::Interleaved );
    for ( auto _ : st )
        benchmark::DoNotOptimize( io::emit_mcmt( l.s, l.goal ) );
}
BENCHMARK( BM_EmitMcmt );

void BM_OracleCannon( benchmark::State& st )
{
    const auto p = model::parse_pmas( fixture( "cannon.pmas" ) );
    oracle::ConcreteConfig cfg;
    cfg.counts.assign( p.templates.size(), static_cast<int>( st.range( 0 ) ) );
    cfg.interp = model::empty_interpretation( p );
    cfg.depth = 15;
    const auto never = model::parse_goal( p, "loc[j] = nil" );
    for ( auto _ : st )
        benchmark::DoNotOptimize( oracle::enumerate_reachable( p, cfg, never ) );
}
BENCHMARK( BM_OracleCannon )->Arg( 1 )->Arg( 2 )->Arg( 3 )->Unit( benchmark::kMillisecond );

} // namespace

BENCHMARK_MAIN();
