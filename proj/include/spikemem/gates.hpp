#pragma once

#include "spikemem/network.hpp"
#include "spikemem/resource_report.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace spikemem
{

enum class and_kind : std::uint8_t
{
  classic,
  fast
};

char const* to_string( and_kind kind );
and_kind parse_and_kind( std::string const& text );

/// A signal feeding a gate or block input: the driving node, extra delay
/// added to every synapse it makes, and the resource category those
/// synapses are itemized under (empty = the gate's default).
struct tap
{
  node_id node;
  int pad_ms = 0;
  std::string category = {};
};

namespace gates
{

enum class gate_kind : std::uint8_t
{
  css,
  not_gate,
  or_gate,
  and_classic,
  and_fast,
  sr_latch
};

char const* to_string( gate_kind kind );

/// One synapse realized for an input terminal.
struct input_descriptor
{
  node_id target;
  int weight_quanta = 0;
  int delay_ms = 0;
  synapse_id synapse = 0;
};

struct port_map
{
  std::map<std::string, std::vector<input_descriptor>> inputs;
  std::map<std::string, node_id> outputs;

  node_id output( std::string const& name ) const;
};

struct gate_handle
{
  gate_kind kind = gate_kind::or_gate;
  port_map ports;
  int latency_ms = 1;
  std::vector<std::uint32_t> owned_neurons;
  /// Internal synapses and CSS hookups; input synapses live in `ports`.
  std::vector<synapse_id> owned_synapses;
  std::vector<node_id> owned_sources;

  /// The primary output ("out", or "q" for the SR latch).
  node_id out() const;

  /// Owned neurons and synapses including the input synapses.
  ownership resources() const;
};

/// Constant spike source: two neurons in a 1 ms ring, started by a single
/// injected spike at t = 0. Phase A fires at odd times, phase B at even
/// times from t = 2, so a target hooked to both phases with delay 1 gets
/// exactly one contribution per millisecond from t = 2 on.
gate_handle build_css( network& net, std::string const& label = "css" );

/// Fires at t+1 iff `in` is silent at t (valid from t = 1).
gate_handle build_not( network& net, gate_handle const& css, tap in, std::string const& label = "not" );

/// Single neuron, fires at t+1 iff at least one input spiked at t.
gate_handle build_or( network& net, std::span<tap const> inputs, std::string const& label = "or" );

/// Two-neuron coincidence AND, latency 2, no CSS.
///
/// A collector neuron fires whenever any input is present and inhibits the
/// output neuron one step later by 2k-1 quanta, while the output neuron gets
/// 2 quanta per present input. The output therefore fires iff all k inputs
/// coincided.
gate_handle build_and_classic( network& net, std::span<tap const> inputs, std::string const& label = "and" );

/// One-neuron AND, latency 1: 2 quanta per input against a constant CSS
/// inhibition of 2k-1 quanta per millisecond.
gate_handle build_and_fast( network& net, gate_handle const& css, std::span<tap const> inputs,
                            std::string const& label = "and" );

/// Dispatches on `kind`; `css` may be null for classic gates.
gate_handle build_and( network& net, and_kind kind, gate_handle const* css, std::span<tap const> inputs,
                       std::string const& label = "and" );

/// Self-exciting neuron. A set spike at t makes q fire every ms from t+1;
/// a reset spike at t silences it from t+1. Reset dominates a simultaneous set.
gate_handle build_sr_latch( network& net, tap set, tap reset, std::string const& label = "sr" );

} // namespace gates
} // namespace spikemem
