#pragma once

#include "spikemem/network.hpp"

#include <map>
#include <set>
#include <string>

namespace spikemem
{

/// Synapse categories that never count as circuit resources (the CSS start-up
/// spike is stimulus, not structure).
inline constexpr char const* css_bootstrap_category = "CSS bootstrap";

/// Neuron and synapse totals, itemized by category label.
struct resource_report
{
  long neurons = 0;
  long synapses = 0;
  std::map<std::string, long> neurons_by_category;
  std::map<std::string, long> synapses_by_category;

  void add_neurons( std::string const& category, long count );
  void add_synapses( std::string const& category, long count );

  bool operator==( resource_report const& ) const = default;
};

/// The set of network elements a block is responsible for. Sets, so a CSS
/// shared by nested blocks is counted once.
struct ownership
{
  std::set<std::uint32_t> neurons;
  std::set<synapse_id> synapses;

  void merge( ownership const& other );
};

/// Counts the owned elements using the category labels stored in the network.
resource_report measure( network const& net, ownership const& owned );

} // namespace spikemem
