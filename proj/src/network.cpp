#include "spikemem/network.hpp"

#include <algorithm>
#include <charconv>

namespace spikemem
{

std::string node_id::str() const
{
  return ( is_neuron() ? "n" : "s" ) + std::to_string( index );
}

node_id node_id::parse( std::string const& text )
{
  if ( text.size() < 2 || ( text[0] != 'n' && text[0] != 's' ) )
  {
    throw network_error( "malformed node reference '" + text + "'" );
  }
  std::uint32_t index = 0;
  auto const* first = text.data() + 1;
  auto const* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars( first, last, index );
  if ( ec != std::errc{} || ptr != last )
  {
    throw network_error( "malformed node reference '" + text + "'" );
  }
  return { text[0] == 'n' ? node_kind::neuron : node_kind::source, index };
}

node_id network::add_neuron( neuron_params const& params, std::string label, std::string category )
{
  if ( params.threshold_quanta < 1 )
  {
    throw network_error( "threshold_quanta must be >= 1" );
  }
  if ( params.refractory_ms < 0 )
  {
    throw network_error( "refractory_ms must be >= 0" );
  }
  if ( !( params.carryover_factor >= 0.0 && params.carryover_factor < 1.0 ) )
  {
    throw network_error( "carryover_factor must lie in [0, 1)" );
  }
  neurons_.push_back( { params, std::move( label ), std::move( category ) } );
  return neuron_ref( static_cast<std::uint32_t>( neurons_.size() - 1 ) );
}

void network::check_schedule( std::vector<int> const& schedule )
{
  for ( std::size_t i = 0; i < schedule.size(); ++i )
  {
    if ( schedule[i] < 0 )
    {
      throw network_error( "spike times must be >= 0" );
    }
    if ( i > 0 && schedule[i] <= schedule[i - 1] )
    {
      throw network_error( "spike schedule must be strictly increasing" );
    }
  }
}

node_id network::add_source( std::string name, std::vector<int> schedule )
{
  check_schedule( schedule );
  if ( !name.empty() && find_source( name ) )
  {
    throw network_error( "duplicate source name '" + name + "'" );
  }
  sources_.push_back( { std::move( name ), std::move( schedule ) } );
  return source_ref( static_cast<std::uint32_t>( sources_.size() - 1 ) );
}

synapse_id network::connect( node_id source, node_id target, int weight_quanta, int delay_ms, std::string category )
{
  if ( !contains( source ) )
  {
    throw network_error( "unknown synapse source " + source.str() );
  }
  if ( !target.is_neuron() || !contains( target ) )
  {
    throw network_error( "synapse target must be an existing neuron, got " + target.str() );
  }
  if ( delay_ms < 1 )
  {
    throw network_error( "synapse delay must be >= 1 ms" );
  }
  if ( weight_quanta == 0 )
  {
    throw network_error( "synapse weight must be non-zero" );
  }
  synapses_.push_back( { source, target, weight_quanta, delay_ms, std::move( category ) } );
  return static_cast<synapse_id>( synapses_.size() - 1 );
}

void network::set_schedule( node_id source, std::vector<int> schedule )
{
  if ( !source.is_source() || !contains( source ) )
  {
    throw network_error( "unknown spike source " + source.str() );
  }
  check_schedule( schedule );
  sources_[source.index].schedule = std::move( schedule );
}

void network::record( node_id id )
{
  if ( !contains( id ) )
  {
    throw network_error( "cannot record unknown node " + id.str() );
  }
  if ( std::find( recorded_.begin(), recorded_.end(), id ) == recorded_.end() )
  {
    recorded_.push_back( id );
  }
}

void network::record_all_neurons()
{
  for ( std::uint32_t i = 0; i < neurons_.size(); ++i )
  {
    record( neuron_ref( i ) );
  }
}

neuron const& network::neuron_at( node_id id ) const
{
  if ( !id.is_neuron() || !contains( id ) )
  {
    throw network_error( "unknown neuron " + id.str() );
  }
  return neurons_[id.index];
}

spike_source const& network::source_at( node_id id ) const
{
  if ( !id.is_source() || !contains( id ) )
  {
    throw network_error( "unknown spike source " + id.str() );
  }
  return sources_[id.index];
}

std::optional<node_id> network::find_source( std::string const& name ) const
{
  for ( std::uint32_t i = 0; i < sources_.size(); ++i )
  {
    if ( sources_[i].name == name )
    {
      return source_ref( i );
    }
  }
  return std::nullopt;
}

bool network::contains( node_id id ) const
{
  return id.is_neuron() ? id.index < neurons_.size() : id.index < sources_.size();
}

network network::reordered( std::span<std::size_t const> order ) const
{
  if ( order.size() != synapses_.size() )
  {
    throw network_error( "synapse order must be a permutation" );
  }
  std::vector<bool> seen( synapses_.size(), false );
  network copy = *this;
  copy.synapses_.clear();
  for ( auto i : order )
  {
    if ( i >= synapses_.size() || seen[i] )
    {
      throw network_error( "synapse order must be a permutation" );
    }
    seen[i] = true;
    copy.synapses_.push_back( synapses_[i] );
  }
  return copy;
}

std::vector<int> const& spike_record::times( node_id id ) const
{
  static std::vector<int> const empty;
  auto it = spikes.find( id );
  return it == spikes.end() ? empty : it->second;
}

bool spike_record::fired_at( node_id id, int t ) const
{
  auto const& ts = times( id );
  return std::binary_search( ts.begin(), ts.end(), t );
}

} // namespace spikemem
