#include "spikemem/resource_report.hpp"

namespace spikemem
{

void resource_report::add_neurons( std::string const& category, long count )
{
  neurons += count;
  neurons_by_category[category] += count;
}

void resource_report::add_synapses( std::string const& category, long count )
{
  synapses += count;
  synapses_by_category[category] += count;
}

void ownership::merge( ownership const& other )
{
  neurons.insert( other.neurons.begin(), other.neurons.end() );
  synapses.insert( other.synapses.begin(), other.synapses.end() );
}

resource_report measure( network const& net, ownership const& owned )
{
  resource_report report;
  for ( auto i : owned.neurons )
  {
    report.add_neurons( net.neuron_at( neuron_ref( i ) ).category, 1 );
  }
  for ( auto s : owned.synapses )
  {
    auto const& category = net.synapse_at( s ).category;
    if ( category != css_bootstrap_category )
    {
      report.add_synapses( category, 1 );
    }
  }
  return report;
}

} // namespace spikemem
