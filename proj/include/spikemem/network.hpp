#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikemem
{

/// Thrown when a network would be constructed in violation of its invariants.
class network_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class node_kind : std::uint8_t
{
  neuron,
  source
};

/// Identifies either a neuron or a spike source. Neuron and source ids are
/// dense and independent: the first neuron is `neuron 0`, the first source
/// is `source 0`.
struct node_id
{
  node_kind kind = node_kind::neuron;
  std::uint32_t index = 0;

  auto operator<=>( node_id const& ) const = default;

  bool is_neuron() const { return kind == node_kind::neuron; }
  bool is_source() const { return kind == node_kind::source; }

  /// "n12" / "s3"
  std::string str() const;
  static node_id parse( std::string const& text );
};

inline node_id neuron_ref( std::uint32_t index ) { return { node_kind::neuron, index }; }
inline node_id source_ref( std::uint32_t index ) { return { node_kind::source, index }; }

using synapse_id = std::uint32_t;

/// Quantized integrate-and-fire parameters.
///
/// One quantum is the smallest synaptic weight. With the defaults a single
/// excitatory quantum arriving alone makes the neuron fire once, in the same
/// timestep, and nothing is carried into the next timestep.
struct neuron_params
{
  int threshold_quanta = 1;
  /// A neuron that fired at t may fire again at t + refractory_ms. Values 0
  /// and 1 both allow firing on consecutive timesteps.
  int refractory_ms = 1;
  /// Fraction of unspent (non-negative) charge kept into the next timestep.
  double carryover_factor = 0.0;

  bool operator==( neuron_params const& ) const = default;
};

struct synapse
{
  node_id source;
  node_id target;
  int weight_quanta = 1;
  int delay_ms = 1;
  std::string category;
};

struct spike_source
{
  std::string name;
  std::vector<int> schedule;
};

struct neuron
{
  neuron_params params;
  std::string label;
  std::string category;
};

/// Flat simulation substrate: neurons, static synapses, spike sources and
/// the set of recorded nodes. Single owner; copy to branch.
class network
{
public:
  node_id add_neuron( neuron_params const& params = {}, std::string label = {}, std::string category = {} );

  /// Schedule must be non-negative and strictly increasing.
  node_id add_source( std::string name, std::vector<int> schedule = {} );

  synapse_id connect( node_id source, node_id target, int weight_quanta, int delay_ms, std::string category = {} );

  void set_schedule( node_id source, std::vector<int> schedule );
  void record( node_id id );
  void record_all_neurons();

  std::size_t num_neurons() const { return neurons_.size(); }
  std::size_t num_sources() const { return sources_.size(); }
  std::size_t num_synapses() const { return synapses_.size(); }

  neuron const& neuron_at( node_id id ) const;
  spike_source const& source_at( node_id id ) const;
  synapse const& synapse_at( synapse_id id ) const { return synapses_.at( id ); }

  std::vector<neuron> const& neurons() const { return neurons_; }
  std::vector<spike_source> const& sources() const { return sources_; }
  std::vector<synapse> const& synapses() const { return synapses_; }
  std::vector<node_id> const& recorded() const { return recorded_; }

  std::optional<node_id> find_source( std::string const& name ) const;
  bool contains( node_id id ) const;

  /// Same network with synapses re-inserted in the given order. `order` must
  /// be a permutation of [0, num_synapses()).
  network reordered( std::span<std::size_t const> order ) const;

private:
  static void check_schedule( std::vector<int> const& schedule );

  std::vector<neuron> neurons_;
  std::vector<spike_source> sources_;
  std::vector<synapse> synapses_;
  std::vector<node_id> recorded_;
};

/// Spike times of every recorded node over [0, duration_ms).
struct spike_record
{
  int duration_ms = 0;
  std::map<node_id, std::vector<int>> spikes;

  std::vector<int> const& times( node_id id ) const;
  bool fired_at( node_id id, int t ) const;

  bool operator==( spike_record const& ) const = default;
};

} // namespace spikemem
