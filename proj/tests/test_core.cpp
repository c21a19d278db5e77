#include "spikemem/network.hpp"
#include "spikemem/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace spikemem;

namespace
{

std::vector<int> fired_times( network const& net, node_id id, int duration )
{
  auto copy = net;
  copy.record( id );
  return run( copy, duration ).times( id );
}

// Random network with sources, excitatory and inhibitory synapses, varied
// delays and occasional non-default parameters.
network random_network( std::mt19937_64& rng, int neurons, int sources, int synapses, int duration )
{
  network net;
  for ( int i = 0; i < neurons; ++i )
  {
    neuron_params p;
    p.threshold_quanta = 1 + static_cast<int>( rng() % 3 );
    p.refractory_ms = static_cast<int>( rng() % 3 );
    net.add_neuron( p );
  }
  for ( int s = 0; s < sources; ++s )
  {
    std::vector<int> sched;
    for ( int t = 0; t < duration; ++t )
    {
      if ( rng() % 3 == 0 )
      {
        sched.push_back( t );
      }
    }
    net.add_source( "src" + std::to_string( s ), sched );
  }
  for ( int e = 0; e < synapses; ++e )
  {
    bool const from_source = rng() % 3 == 0;
    node_id src = from_source ? source_ref( static_cast<std::uint32_t>( rng() % sources ) )
                              : neuron_ref( static_cast<std::uint32_t>( rng() % neurons ) );
    int w = static_cast<int>( rng() % 5 ) - 2;
    if ( w == 0 )
    {
      w = 1;
    }
    net.connect( src, neuron_ref( static_cast<std::uint32_t>( rng() % neurons ) ), w,
                 1 + static_cast<int>( rng() % 4 ) );
  }
  net.record_all_neurons();
  return net;
}

} // namespace

TEST( Network, NeuronIdsAreDenseInInsertionOrder )
{
  network net;
  EXPECT_EQ( net.add_neuron(), neuron_ref( 0 ) );
  net.add_neuron();
  net.add_neuron();
  EXPECT_EQ( net.add_neuron(), neuron_ref( 3 ) );
  EXPECT_EQ( net.add_source( "a" ), source_ref( 0 ) );
  EXPECT_EQ( net.num_neurons(), 4u );
}

TEST( Network, RejectsInvalidNeuronParams )
{
  network net;
  EXPECT_THROW( net.add_neuron( { 0, 1, 0.0 } ), network_error );
  EXPECT_THROW( net.add_neuron( { 1, -1, 0.0 } ), network_error );
  EXPECT_THROW( net.add_neuron( { 1, 1, 1.0 } ), network_error );
  EXPECT_THROW( net.add_neuron( { 1, 1, -0.1 } ), network_error );
  EXPECT_NO_THROW( net.add_neuron( { 1, 0, 0.5 } ) );
}

TEST( Network, RejectsInvalidSynapses )
{
  network net;
  auto a = net.add_source( "a" );
  auto b = net.add_neuron();
  EXPECT_THROW( net.connect( a, b, 1, 0 ), network_error );
  EXPECT_THROW( net.connect( a, b, 0, 1 ), network_error );
  EXPECT_THROW( net.connect( a, neuron_ref( 7 ), 1, 1 ), network_error );
  EXPECT_THROW( net.connect( source_ref( 3 ), b, 1, 1 ), network_error );
  EXPECT_THROW( net.connect( b, a, 1, 1 ), network_error );
  EXPECT_EQ( net.connect( a, b, -2, 3 ), 0u );
}

TEST( Network, RejectsInvalidSchedules )
{
  network net;
  EXPECT_THROW( net.add_source( "x", { 3, 3 } ), network_error );
  EXPECT_THROW( net.add_source( "x", { 4, 2 } ), network_error );
  EXPECT_THROW( net.add_source( "x", { -1 } ), network_error );
  net.add_source( "x", { 1 } );
  EXPECT_THROW( net.add_source( "x" ), network_error );
}

TEST( Network, NodeIdTextRoundTrips )
{
  for ( auto id : { neuron_ref( 0 ), neuron_ref( 12 ), source_ref( 3 ) } )
  {
    EXPECT_EQ( node_id::parse( id.str() ), id );
  }
  EXPECT_EQ( neuron_ref( 12 ).str(), "n12" );
  EXPECT_EQ( source_ref( 3 ).str(), "s3" );
  EXPECT_THROW( node_id::parse( "x3" ), network_error );
  EXPECT_THROW( node_id::parse( "n" ), network_error );
}

TEST( Simulator, ExcitatoryDelaySemantics )
{
  network net;
  auto a = net.add_source( "a", { 5 } );
  auto b = net.add_neuron();
  net.connect( a, b, 1, 1 );
  EXPECT_EQ( fired_times( net, b, 10 ), ( std::vector<int>{ 6 } ) );
}

TEST( Simulator, InhibitionArrivesAfterDelay )
{
  // Inhibition of -2 at t=3 cancels two excitatory quanta arriving then too.
  network net;
  auto a = net.add_source( "a", { 0 } );
  auto e = net.add_source( "e", { 1, 2 } );
  auto b = net.add_neuron();
  net.connect( a, b, -2, 3 );
  net.connect( e, b, 2, 1 );
  EXPECT_EQ( fired_times( net, b, 6 ), ( std::vector<int>{ 2 } ) );
}

TEST( Simulator, EqualExcitationAndInhibitionCancel )
{
  network net;
  auto a = net.add_source( "a", { 4 } );
  auto c = net.add_source( "c", { 4 } );
  auto b = net.add_neuron();
  net.connect( a, b, 1, 1 );
  net.connect( c, b, -1, 1 );
  EXPECT_TRUE( fired_times( net, b, 10 ).empty() );
}

TEST( Simulator, FiresOnConsecutiveMilliseconds )
{
  network net;
  auto a = net.add_source( "a", { 3, 4 } );
  auto b = net.add_neuron();
  net.connect( a, b, 1, 1 );
  EXPECT_EQ( fired_times( net, b, 10 ), ( std::vector<int>{ 4, 5 } ) );
}

TEST( Simulator, SourcesAreRecordedVerbatim )
{
  network net;
  auto a = net.add_source( "a", { 2, 4 } );
  EXPECT_EQ( fired_times( net, a, 10 ), ( std::vector<int>{ 2, 4 } ) );
}

TEST( Simulator, ChainAddsDelays )
{
  network net;
  auto src = net.add_source( "src", { 0 } );
  auto n0 = net.add_neuron();
  auto n1 = net.add_neuron();
  net.connect( src, n0, 1, 1 );
  net.connect( n0, n1, 1, 1 );
  EXPECT_EQ( fired_times( net, n1, 5 ), ( std::vector<int>{ 2 } ) );
}

TEST( Simulator, CoincidentInputsProduceOneSpike )
{
  network net;
  auto a = net.add_source( "a", { 3 } );
  auto b = net.add_source( "b", { 3 } );
  auto orn = net.add_neuron();
  net.connect( a, orn, 1, 1 );
  net.connect( b, orn, 1, 1 );
  EXPECT_EQ( fired_times( net, orn, 10 ), ( std::vector<int>{ 4 } ) );
}

TEST( Simulator, RefractoryPeriodSuppressesFiring )
{
  network net;
  auto a = net.add_source( "a", { 0, 1, 2, 3, 4, 5 } );
  auto b = net.add_neuron( { 1, 3, 0.0 } );
  net.connect( a, b, 1, 1 );
  // Fires at 1, then may fire again from 4.
  EXPECT_EQ( fired_times( net, b, 8 ), ( std::vector<int>{ 1, 4 } ) );
}

TEST( Simulator, CarryoverAccumulatesSubthresholdCharge )
{
  network net;
  auto a = net.add_source( "a", { 0, 1 } );
  auto b = net.add_neuron( { 2, 1, 0.5 } );
  net.connect( a, b, 1, 1 );
  // 1 at t=1 (no fire), 1 + 0.5 at t=2 (no fire), 0.75 at t=3 ...
  EXPECT_TRUE( fired_times( net, b, 8 ).empty() );

  network net2;
  auto a2 = net2.add_source( "a", { 0, 1 } );
  auto b2 = net2.add_neuron( { 2, 1, 0.99 } );
  net2.connect( a2, b2, 1, 1 );
  net2.connect( a2, b2, 1, 2 );
  // t=1: 1; t=2: 1 + 1 + 0.99 >= 2 -> fire; residual resets.
  EXPECT_EQ( fired_times( net2, b2, 8 ), ( std::vector<int>{ 2 } ) );
}

TEST( Simulator, NegativeChargeIsNotCarried )
{
  network net;
  auto a = net.add_source( "a", { 0 } );
  auto e = net.add_source( "e", { 1 } );
  auto b = net.add_neuron( { 1, 1, 0.9 } );
  net.connect( a, b, -5, 1 );
  net.connect( e, b, 1, 1 );
  EXPECT_EQ( fired_times( net, b, 6 ), ( std::vector<int>{ 2 } ) );
}

TEST( Simulator, RunRejectsNonPositiveDuration )
{
  network net;
  EXPECT_THROW( run( net, 0 ), std::invalid_argument );
}

TEST( Simulator, StepReportsSourcesThenNeurons )
{
  network net;
  auto n = net.add_neuron();
  auto a = net.add_source( "a", { 0, 1 } );
  net.connect( a, n, 1, 1 );
  simulator sim( net );
  EXPECT_EQ( sim.step(), ( std::vector<node_id>{ a } ) );
  EXPECT_EQ( sim.step(), ( std::vector<node_id>{ a, n } ) );
  EXPECT_EQ( sim.now(), 2 );
}

// A neuron with default parameters fires at t iff the quanta arriving at t
// reach its threshold; enumerate every small combination of arrivals.
TEST( SimulatorProperty, LinearThresholdMatchesDirectOracle )
{
  std::vector<int> const weights{ 2, 1, -1, -2 };
  for ( int threshold = 1; threshold <= 3; ++threshold )
  {
    for ( unsigned mask = 0; mask < ( 1u << weights.size() ); ++mask )
    {
      network net;
      auto target = net.add_neuron( { threshold, 1, 0.0 } );
      int sum = 0;
      for ( std::size_t i = 0; i < weights.size(); ++i )
      {
        bool const on = ( mask >> i ) & 1u;
        auto s = net.add_source( "i" + std::to_string( i ), on ? std::vector<int>{ 2 } : std::vector<int>{} );
        net.connect( s, target, weights[i], 1 );
        sum += on ? weights[i] : 0;
      }
      bool const expected = sum >= threshold;
      EXPECT_EQ( fired_times( net, target, 6 ) == std::vector<int>{ 3 }, expected )
          << "threshold " << threshold << " mask " << mask;
      if ( !expected )
      {
        EXPECT_TRUE( fired_times( net, target, 6 ).empty() );
      }
    }
  }
}

TEST( SimulatorProperty, RepeatedRunsAreIdentical )
{
  std::mt19937_64 rng( 11 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    auto net = random_network( rng, 30, 4, 120, 60 );
    EXPECT_EQ( run( net, 60 ), run( net, 60 ) );
  }
}

TEST( SimulatorProperty, SynapseOrderDoesNotMatter )
{
  std::mt19937_64 rng( 12 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    auto net = random_network( rng, 30, 4, 120, 60 );
    std::vector<std::size_t> order( net.num_synapses() );
    std::iota( order.begin(), order.end(), std::size_t{ 0 } );
    std::shuffle( order.begin(), order.end(), rng );
    auto shuffled = net.reordered( order );
    EXPECT_EQ( run( net, 60 ), run( shuffled, 60 ) );
  }
}

TEST( SimulatorProperty, RecordedSpikesStayInRangeAndIncrease )
{
  std::mt19937_64 rng( 13 );
  for ( int trial = 0; trial < 10; ++trial )
  {
    auto net = random_network( rng, 20, 3, 80, 40 );
    auto rec = run_all( net, 40 );
    for ( auto const& [id, times] : rec.spikes )
    {
      EXPECT_TRUE( std::is_sorted( times.begin(), times.end() ) );
      EXPECT_EQ( std::adjacent_find( times.begin(), times.end() ), times.end() );
      for ( auto t : times )
      {
        EXPECT_GE( t, 0 );
        EXPECT_LT( t, 40 );
      }
    }
  }
}

// A neuron receiving one +1 quantum and nothing else fires exactly once.
TEST( SimulatorProperty, SingleQuantumFiresExactlyOnce )
{
  for ( int delay = 1; delay <= 5; ++delay )
  {
    for ( int t0 = 0; t0 < 5; ++t0 )
    {
      network net;
      auto a = net.add_source( "a", { t0 } );
      auto b = net.add_neuron();
      net.connect( a, b, 1, delay );
      EXPECT_EQ( fired_times( net, b, 20 ), ( std::vector<int>{ t0 + delay } ) );
    }
  }
}
