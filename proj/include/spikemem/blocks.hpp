#pragma once

#include "spikemem/gates.hpp"
#include "spikemem/network.hpp"
#include "spikemem/resource_report.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spikemem::blocks
{

enum class block_kind : std::uint8_t
{
  decoder,
  encoder,
  multiplexer,
  demultiplexer,
  d_latch,
  memory
};

char const* to_string( block_kind kind );
block_kind parse_block_kind( std::string const& text );

/// Construction parameters as recorded on a handle.
struct block_params
{
  int n = 0;          ///< decoder/mux/demux/memory select inputs; encoder input count
  int registers = 0;  ///< memory only
  int bits = 0;       ///< memory only
};

struct named_node
{
  std::string name;
  node_id node;
};

struct block_handle
{
  block_kind kind = block_kind::decoder;
  and_kind and_type = and_kind::fast;
  block_params params;

  /// Ports in declaration order (ch0, ch1, ... rather than lexical).
  std::vector<named_node> inputs;
  std::vector<named_node> outputs;

  /// Delay from the block's input terminals to every output channel.
  int latency_ms = 0;
  /// Extra delay ahead of the block inputs (the D latch's optional input NOT).
  int input_offset_ms = 0;

  ownership owned;
  /// Elements the block relies on but does not count as its own (the D
  /// latch's fast-AND CSS hookups and optional input NOT).
  ownership support;
  resource_report resources;

  std::vector<gates::gate_handle> gates;
  std::vector<block_handle> children;

  node_id output( std::string const& name ) const;
  node_id input( std::string const& name ) const;
  int end_to_end_latency_ms() const { return latency_ms + input_offset_ms; }
};

/// n-input one-hot decoder: n NOT gates and 2^n AND gates. Channel j's AND
/// takes, for every bit b, the direct select line when bit b of j is set and
/// the NOT output otherwise; direct lines are padded 1 ms to meet the NOT
/// path. Outputs ch0 .. ch(2^n - 1).
block_handle build_decoder( network& net, std::span<tap const> selects, and_kind kind,
                            gates::gate_handle const& css );

/// One-hot to binary: OR b collects every input d_i (i >= 1) with bit b of i
/// set. d0 stays unconnected. Outputs or0 .. or(ceil(log2 inputs) - 1).
block_handle build_encoder( network& net, std::span<tap const> data );

/// Data selector: the decoder structure with each AND additionally taking
/// its data line, all ANDs collected by one output OR ("out").
block_handle build_multiplexer( network& net, std::span<tap const> selects, std::span<tap const> data,
                                and_kind kind, gates::gate_handle const& css );

/// Decoder structure whose ANDs all share the single data line.
block_handle build_demultiplexer( network& net, std::span<tap const> selects, tap data, and_kind kind,
                                  gates::gate_handle const& css );

struct d_latch_inputs
{
  tap store;
  tap data;
  /// Negated data. When absent the latch builds its own NOT on `data` and
  /// pads store and data by 1 ms to match it.
  std::optional<tap> data_not;
};

/// store AND data sets an SR latch, store AND data_not resets it. Resources
/// owned by the latch exclude the CSS hookups of fast ANDs and the optional
/// input NOT (those are recorded in `support`).
block_handle build_d_latch( network& net, d_latch_inputs const& in, and_kind kind,
                            gates::gate_handle const* css, std::string const& label = "dlatch" );

/// Decoder-addressed matrix of r x c D latches. Decoder channel i (i >= 1)
/// drives the store terminals of register i; channel 0 has no register.
/// Inputs s0 .. s(n-1) with n = ceil(log2(r + 1)) and d0 .. d(c-1); outputs
/// q<i>_<j> for register i in [1, r] and bit j in [0, c).
block_handle build_memory( network& net, std::span<tap const> selects, std::span<tap const> data, int registers,
                           and_kind kind, gates::gate_handle const& css );

/// ceil(log2(value)) for value >= 1.
int ceil_log2( long value );

/// Number of decoder inputs needed to address `registers` registers.
int memory_select_bits( int registers );

/// Name of the memory output for register `reg` (1-based) bit `bit`.
std::string memory_output_name( int reg, int bit );

} // namespace spikemem::blocks
