#pragma once

#include "spikemem/network.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace spikemem
{

/// Fixed 1 ms step simulation of a network.
///
/// At step t each neuron sums the weight quanta of every synapse whose source
/// spiked at t - delay_ms, adds carryover_factor times its residual charge,
/// and fires iff the total reaches threshold_quanta and the refractory rule
/// permits. Residual charge is reset to 0 after firing and never drops below
/// 0. Input sums are integers, so the result does not depend on synapse
/// order.
class simulator
{
public:
  explicit simulator( network const& net );

  /// Advances one timestep and returns the nodes (sources first, then
  /// neurons, each in index order) that spiked at the current time.
  std::vector<node_id> const& step();

  int now() const { return time_; }

private:
  struct edge
  {
    std::uint32_t target;
    int weight;
    int delay;
  };

  void deliver( std::span<edge const> edges );

  std::vector<neuron_params> params_;
  std::vector<std::vector<int>> schedules_;
  std::vector<std::size_t> schedule_pos_;

  // CSR adjacency: outgoing edges of neuron i are neuron_edges_[neuron_offsets_[i] .. neuron_offsets_[i+1]).
  std::vector<std::size_t> neuron_offsets_;
  std::vector<edge> neuron_edges_;
  std::vector<std::size_t> source_offsets_;
  std::vector<edge> source_edges_;

  // Pending input quanta, ring-indexed by arrival time modulo horizon_.
  std::size_t horizon_ = 1;
  std::vector<std::int64_t> pending_;

  std::vector<double> residual_;
  std::vector<int> last_fired_;
  std::vector<node_id> fired_;
  int time_ = 0;
};

/// Runs t = 0 .. duration_ms-1 and records every node in net.recorded().
spike_record run( network const& net, int duration_ms );

/// Same as run() but records every neuron and source.
spike_record run_all( network const& net, int duration_ms );

} // namespace spikemem
