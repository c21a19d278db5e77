#include "spikemem/simulator.hpp"

#include <algorithm>
#include <limits>

namespace spikemem
{

namespace
{

constexpr int never_fired = std::numeric_limits<int>::min() / 2;

template<typename Edge>
void build_csr( std::size_t nodes, std::vector<std::pair<std::uint32_t, Edge>> const& pairs,
                std::vector<std::size_t>& offsets, std::vector<Edge>& edges )
{
  offsets.assign( nodes + 1, 0 );
  for ( auto const& [from, e] : pairs )
  {
    ++offsets[from + 1];
  }
  for ( std::size_t i = 0; i < nodes; ++i )
  {
    offsets[i + 1] += offsets[i];
  }
  edges.resize( pairs.size() );
  auto cursor = offsets;
  for ( auto const& [from, e] : pairs )
  {
    edges[cursor[from]++] = e;
  }
}

} // namespace

simulator::simulator( network const& net )
{
  params_.reserve( net.num_neurons() );
  for ( auto const& n : net.neurons() )
  {
    params_.push_back( n.params );
  }
  for ( auto const& s : net.sources() )
  {
    schedules_.push_back( s.schedule );
  }
  schedule_pos_.assign( schedules_.size(), 0 );

  std::vector<std::pair<std::uint32_t, edge>> from_neurons;
  std::vector<std::pair<std::uint32_t, edge>> from_sources;
  int max_delay = 1;
  for ( auto const& s : net.synapses() )
  {
    edge e{ s.target.index, s.weight_quanta, s.delay_ms };
    max_delay = std::max( max_delay, s.delay_ms );
    ( s.source.is_neuron() ? from_neurons : from_sources ).emplace_back( s.source.index, e );
  }
  build_csr( net.num_neurons(), from_neurons, neuron_offsets_, neuron_edges_ );
  build_csr( net.num_sources(), from_sources, source_offsets_, source_edges_ );

  horizon_ = static_cast<std::size_t>( max_delay ) + 1;
  pending_.assign( horizon_ * params_.size(), 0 );
  residual_.assign( params_.size(), 0.0 );
  last_fired_.assign( params_.size(), never_fired );
}

void simulator::deliver( std::span<edge const> edges )
{
  auto const n = params_.size();
  for ( auto const& e : edges )
  {
    auto slot = static_cast<std::size_t>( time_ + e.delay ) % horizon_;
    pending_[slot * n + e.target] += e.weight;
  }
}

std::vector<node_id> const& simulator::step()
{
  fired_.clear();
  auto const n = params_.size();
  auto const slot = static_cast<std::size_t>( time_ ) % horizon_;

  for ( std::uint32_t s = 0; s < schedules_.size(); ++s )
  {
    auto& pos = schedule_pos_[s];
    auto const& sched = schedules_[s];
    if ( pos < sched.size() && sched[pos] == time_ )
    {
      ++pos;
      fired_.push_back( source_ref( s ) );
    }
  }

  // Decide every neuron from the inputs that arrive now before any new
  // spike is delivered; all delays are >= 1 so deliveries land in later slots.
  auto const first_neuron = fired_.size();
  for ( std::uint32_t i = 0; i < n; ++i )
  {
    auto& arriving = pending_[slot * n + i];
    auto const& p = params_[i];
    double const charge = static_cast<double>( arriving ) + p.carryover_factor * residual_[i];
    arriving = 0;

    bool const refractory = time_ - last_fired_[i] < std::max( 1, p.refractory_ms );
    if ( refractory )
    {
      residual_[i] = 0.0;
      continue;
    }
    if ( charge >= static_cast<double>( p.threshold_quanta ) )
    {
      residual_[i] = 0.0;
      last_fired_[i] = time_;
      fired_.push_back( neuron_ref( i ) );
    }
    else
    {
      residual_[i] = std::max( 0.0, charge );
    }
  }

  for ( std::size_t k = 0; k < first_neuron; ++k )
  {
    auto const s = fired_[k].index;
    deliver( std::span( source_edges_ ).subspan( source_offsets_[s], source_offsets_[s + 1] - source_offsets_[s] ) );
  }
  for ( std::size_t k = first_neuron; k < fired_.size(); ++k )
  {
    auto const i = fired_[k].index;
    deliver( std::span( neuron_edges_ ).subspan( neuron_offsets_[i], neuron_offsets_[i + 1] - neuron_offsets_[i] ) );
  }

  ++time_;
  return fired_;
}

namespace
{

spike_record run_recording( network const& net, int duration_ms, std::vector<node_id> const& recorded )
{
  if ( duration_ms < 1 )
  {
    throw network_error( "duration_ms must be >= 1" );
  }
  spike_record record;
  record.duration_ms = duration_ms;
  std::vector<bool> wanted_neurons( net.num_neurons(), false );
  std::vector<bool> wanted_sources( net.num_sources(), false );
  for ( auto id : recorded )
  {
    record.spikes[id];
    ( id.is_neuron() ? wanted_neurons : wanted_sources )[id.index] = true;
  }

  simulator sim( net );
  for ( int t = 0; t < duration_ms; ++t )
  {
    for ( auto id : sim.step() )
    {
      if ( ( id.is_neuron() ? wanted_neurons : wanted_sources )[id.index] )
      {
        record.spikes[id].push_back( t );
      }
    }
  }
  return record;
}

} // namespace

spike_record run( network const& net, int duration_ms )
{
  return run_recording( net, duration_ms, net.recorded() );
}

spike_record run_all( network const& net, int duration_ms )
{
  std::vector<node_id> all;
  for ( std::uint32_t i = 0; i < net.num_sources(); ++i )
  {
    all.push_back( source_ref( i ) );
  }
  for ( std::uint32_t i = 0; i < net.num_neurons(); ++i )
  {
    all.push_back( neuron_ref( i ) );
  }
  return run_recording( net, duration_ms, all );
}

} // namespace spikemem
