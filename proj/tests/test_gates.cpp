#include "spikemem/gates.hpp"
#include "spikemem/simulator.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace spikemem;
using namespace spikemem::gates;

namespace
{

std::vector<int> range( int from, int to )
{
  std::vector<int> out;
  for ( int t = from; t < to; ++t )
  {
    out.push_back( t );
  }
  return out;
}

std::vector<int> simulate( network net, node_id probe, int duration )
{
  net.record( probe );
  return run( net, duration ).times( probe );
}

std::vector<int> from_time( std::vector<int> const& times, int valid_from )
{
  std::vector<int> out;
  for ( auto t : times )
  {
    if ( t >= valid_from )
    {
      out.push_back( t );
    }
  }
  return out;
}

std::vector<int> random_presence( std::mt19937_64& rng, int from, int to )
{
  std::vector<int> out;
  for ( int t = from; t < to; ++t )
  {
    if ( rng() & 1u )
    {
      out.push_back( t );
    }
  }
  return out;
}

bool has( std::vector<int> const& v, int t )
{
  return std::find( v.begin(), v.end(), t ) != v.end();
}

struct and_fixture
{
  network net;
  std::vector<node_id> inputs;
  gate_handle gate;
};

and_fixture make_and( and_kind kind, std::vector<std::vector<int>> const& schedules )
{
  and_fixture f;
  auto css = build_css( f.net );
  std::vector<tap> taps;
  for ( std::size_t i = 0; i < schedules.size(); ++i )
  {
    auto s = f.net.add_source( "in" + std::to_string( i ), schedules[i] );
    f.inputs.push_back( s );
    taps.push_back( { s } );
  }
  f.gate = build_and( f.net, kind, &css, taps );
  return f;
}

} // namespace

TEST( Css, PhasesCoverEveryMillisecondOnce )
{
  network net;
  auto css = build_css( net );
  auto a = css.ports.output( "phase_a" );
  auto b = css.ports.output( "phase_b" );
  net.record( a );
  net.record( b );
  auto rec = run( net, 10 );
  std::multiset<int> all( rec.times( a ).begin(), rec.times( a ).end() );
  all.insert( rec.times( b ).begin(), rec.times( b ).end() );
  auto const expected = range( 1, 10 );
  EXPECT_EQ( std::vector<int>( all.begin(), all.end() ), expected );
}

TEST( Css, HookedTargetFiresEveryMillisecondFromTwo )
{
  network net;
  auto css = build_css( net );
  auto target = net.add_neuron();
  net.connect( css.ports.output( "phase_a" ), target, 1, 1 );
  net.connect( css.ports.output( "phase_b" ), target, 1, 1 );
  EXPECT_EQ( simulate( net, target, 12 ), range( 2, 12 ) );
}

TEST( Css, ResourcesExcludeBootstrap )
{
  network net;
  auto css = build_css( net );
  auto rep = measure( net, css.resources() );
  EXPECT_EQ( rep.neurons, 2 );
  EXPECT_EQ( rep.synapses, 2 );
  EXPECT_EQ( css.owned_sources.size(), 1u );
  EXPECT_EQ( rep.synapses_by_category.at( "Internal CSS" ), 2 );
}

TEST( NotGate, SilencesOneStepAfterInput )
{
  network net;
  auto css = build_css( net );
  auto in = net.add_source( "in", { 3 } );
  auto g = build_not( net, css, { in } );
  // The CSS reaches its targets from t=2; t=1 is inside the warmup mask.
  EXPECT_EQ( simulate( net, g.out(), 6 ), ( std::vector<int>{ 2, 3, 5 } ) );
  EXPECT_EQ( g.latency_ms, 1 );
}

TEST( NotGate, FiresConstantlyWithoutInput )
{
  network net;
  auto css = build_css( net );
  auto in = net.add_source( "in" );
  auto g = build_not( net, css, { in } );
  EXPECT_EQ( simulate( net, g.out(), 20 ), range( 2, 20 ) );
}

TEST( NotGate, SilentWhenInputAlwaysPresent )
{
  network net;
  auto css = build_css( net );
  auto in = net.add_source( "in", range( 0, 20 ) );
  auto g = build_not( net, css, { in } );
  EXPECT_TRUE( simulate( net, g.out(), 20 ).empty() );
}

TEST( NotGate, RequiresCss )
{
  network net;
  auto in = net.add_source( "in" );
  auto notcss = build_or( net, std::vector<tap>{ { in } } );
  EXPECT_THROW( build_not( net, notcss, { in } ), network_error );
}

TEST( NotGate, Resources )
{
  network net;
  auto css = build_css( net );
  auto in = net.add_source( "in" );
  auto rep = measure( net, build_not( net, css, { in } ).resources() );
  EXPECT_EQ( rep.neurons, 1 );
  EXPECT_EQ( rep.synapses, 3 );
  EXPECT_EQ( rep.synapses_by_category.at( "CSS to NOT" ), 2 );
  EXPECT_EQ( rep.synapses_by_category.at( "Input to NOT" ), 1 );
}

TEST( OrGate, Examples )
{
  auto or_out = []( std::vector<int> a, std::vector<int> b ) {
    network net;
    auto sa = net.add_source( "a", a );
    auto sb = net.add_source( "b", b );
    auto g = build_or( net, std::vector<tap>{ { sa }, { sb } } );
    return simulate( net, g.out(), 10 );
  };
  EXPECT_EQ( or_out( { 2 }, {} ), ( std::vector<int>{ 3 } ) );
  EXPECT_EQ( or_out( { 2 }, { 2 } ), ( std::vector<int>{ 3 } ) );
  EXPECT_TRUE( or_out( {}, {} ).empty() );
}

TEST( OrGate, RejectsEmptyFanIn )
{
  network net;
  EXPECT_THROW( build_or( net, std::vector<tap>{} ), network_error );
}

TEST( ClassicAnd, Examples )
{
  auto both = make_and( and_kind::classic, { { 5 }, { 5 } } );
  EXPECT_EQ( simulate( both.net, both.gate.out(), 12 ), ( std::vector<int>{ 7 } ) );
  auto one = make_and( and_kind::classic, { { 5 }, {} } );
  EXPECT_TRUE( simulate( one.net, one.gate.out(), 12 ).empty() );
}

TEST( ClassicAnd, ThreeInputsAllCombinations )
{
  for ( unsigned mask = 0; mask < 8; ++mask )
  {
    std::vector<std::vector<int>> sched( 3 );
    for ( int i = 0; i < 3; ++i )
    {
      if ( ( mask >> i ) & 1u )
      {
        sched[i] = { 0 };
      }
    }
    auto f = make_and( and_kind::classic, sched );
    auto out = simulate( f.net, f.gate.out(), 8 );
    EXPECT_EQ( out, mask == 7 ? std::vector<int>{ 2 } : std::vector<int>{} ) << "mask " << mask;
  }
}

TEST( ClassicAnd, Resources )
{
  auto f = make_and( and_kind::classic, { {}, {} } );
  auto rep = measure( f.net, f.gate.resources() );
  EXPECT_EQ( rep.neurons, 2 );
  EXPECT_EQ( rep.synapses_by_category.at( "Internal AND (classic)" ), 1 );
  EXPECT_EQ( rep.synapses, 1 + 2 * 2 );
  EXPECT_EQ( f.gate.latency_ms, 2 );
}

TEST( FastAnd, Examples )
{
  auto both = make_and( and_kind::fast, { { 5 }, { 5 } } );
  EXPECT_EQ( simulate( both.net, both.gate.out(), 12 ), ( std::vector<int>{ 6 } ) );

  auto lone = make_and( and_kind::fast, { range( 0, 20 ), {} } );
  EXPECT_TRUE( from_time( simulate( lone.net, lone.gate.out(), 20 ), 2 ).empty() );

  auto stream = make_and( and_kind::fast, { range( 2, 10 ), range( 2, 10 ) } );
  EXPECT_EQ( simulate( stream.net, stream.gate.out(), 14 ), range( 3, 11 ) );
}

TEST( FastAnd, ResourcesAndCssRequirement )
{
  auto f = make_and( and_kind::fast, { {}, {}, {} } );
  auto rep = measure( f.net, f.gate.resources() );
  EXPECT_EQ( rep.neurons, 1 );
  EXPECT_EQ( rep.synapses_by_category.at( "CSS to AND (fast)" ), 2 );
  EXPECT_EQ( rep.synapses, 3 + 2 );
  EXPECT_EQ( f.gate.latency_ms, 1 );

  network net;
  auto s = net.add_source( "s" );
  std::vector<tap> taps{ { s }, { s } };
  EXPECT_THROW( build_and( net, and_kind::fast, nullptr, taps ), network_error );
}

TEST( SrLatch, SetThenReset )
{
  network net;
  auto set = net.add_source( "set", { 2 } );
  auto reset = net.add_source( "reset", { 6 } );
  auto g = build_sr_latch( net, { set }, { reset } );
  EXPECT_EQ( simulate( net, g.out(), 15 ), ( std::vector<int>{ 3, 4, 5, 6 } ) );
}

TEST( SrLatch, NoSetStaysSilent )
{
  network net;
  auto set = net.add_source( "set" );
  auto reset = net.add_source( "reset", { 3 } );
  auto g = build_sr_latch( net, { set }, { reset } );
  EXPECT_TRUE( simulate( net, g.out(), 15 ).empty() );
}

TEST( SrLatch, RepeatedSetIsIdempotent )
{
  network net;
  auto set = net.add_source( "set", { 2, 4 } );
  auto reset = net.add_source( "reset", { 8 } );
  auto g = build_sr_latch( net, { set }, { reset } );
  EXPECT_EQ( simulate( net, g.out(), 15 ), range( 3, 9 ) );
}

TEST( SrLatch, ResetDominatesSimultaneousSet )
{
  network net;
  auto set = net.add_source( "set", { 2, 6 } );
  auto reset = net.add_source( "reset", { 6 } );
  auto g = build_sr_latch( net, { set }, { reset } );
  EXPECT_EQ( simulate( net, g.out(), 12 ), range( 3, 7 ) );
  auto rep = measure( net, g.resources() );
  EXPECT_EQ( rep.neurons, 1 );
  EXPECT_EQ( rep.synapses_by_category.at( "Internal SR Latch" ), 1 );
}

TEST( Gates, NegativePadIsRejected )
{
  network net;
  auto s = net.add_source( "s" );
  EXPECT_THROW( build_or( net, std::vector<tap>{ { s, -1 } } ), network_error );
}

TEST( Gates, PadDelaysInput )
{
  network net;
  auto s = net.add_source( "s", { 4 } );
  auto g = build_or( net, std::vector<tap>{ { s, 3 } } );
  EXPECT_EQ( simulate( net, g.out(), 12 ), ( std::vector<int>{ 8 } ) );
}

// Output at t + latency equals the boolean function of the inputs at t, for
// random presence patterns, every gate and fan-ins 1..4.
TEST( GatesProperty, BooleanConformanceUnderRandomSchedules )
{
  std::mt19937_64 rng( 21 );
  int const duration = 80;
  for ( int trial = 0; trial < 10; ++trial )
  {
    for ( int k = 1; k <= 4; ++k )
    {
      std::vector<std::vector<int>> sched;
      for ( int i = 0; i < k; ++i )
      {
        sched.push_back( random_presence( rng, 1, duration - 4 ) );
      }
      for ( auto kind : { and_kind::classic, and_kind::fast } )
      {
        auto f = make_and( kind, sched );
        auto out = simulate( f.net, f.gate.out(), duration );
        int const lat = f.gate.latency_ms;
        for ( int t = 1; t + lat < duration; ++t )
        {
          bool all = true;
          for ( auto const& s : sched )
          {
            all = all && has( s, t );
          }
          EXPECT_EQ( has( out, t + lat ), all ) << to_string( kind ) << " k=" << k << " t=" << t;
        }
      }

      network net;
      std::vector<tap> taps;
      for ( auto const& s : sched )
      {
        taps.push_back( { net.add_source( "in" + std::to_string( taps.size() ), s ) } );
      }
      auto g = build_or( net, taps );
      auto out = simulate( net, g.out(), duration );
      for ( int t = 1; t + 1 < duration; ++t )
      {
        bool any = false;
        for ( auto const& s : sched )
        {
          any = any || has( s, t );
        }
        EXPECT_EQ( has( out, t + 1 ), any ) << "OR k=" << k << " t=" << t;
      }
    }

    network net;
    auto css = build_css( net );
    auto in_sched = random_presence( rng, 1, duration - 2 );
    auto g = build_not( net, css, { net.add_source( "in", in_sched ) } );
    auto out = simulate( net, g.out(), duration );
    for ( int t = 1; t + 1 < duration; ++t )
    {
      EXPECT_EQ( has( out, t + 1 ), !has( in_sched, t ) ) << "NOT t=" << t;
    }
  }
}

TEST( GatesProperty, FastAndLeadsClassicByOneMillisecond )
{
  std::mt19937_64 rng( 22 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    std::vector<std::vector<int>> sched{ random_presence( rng, 1, 50 ), random_presence( rng, 1, 50 ),
                                         random_presence( rng, 1, 50 ) };
    auto fast = make_and( and_kind::fast, sched );
    auto classic = make_and( and_kind::classic, sched );
    auto f = from_time( simulate( fast.net, fast.gate.out(), 60 ), 2 );
    auto c = from_time( simulate( classic.net, classic.gate.out(), 60 ), 3 );
    for ( auto& t : c )
    {
      --t;
    }
    EXPECT_EQ( f, c );
  }
}

TEST( GatesProperty, OneSpikePerSatisfiedOperation )
{
  // Every input present every ms: each gate fires once per ms, never more.
  for ( auto kind : { and_kind::classic, and_kind::fast } )
  {
    auto f = make_and( kind, { range( 1, 30 ), range( 1, 30 ) } );
    auto out = simulate( f.net, f.gate.out(), 40 );
    EXPECT_EQ( out, range( 1 + f.gate.latency_ms, 30 + f.gate.latency_ms ) );
  }
}
