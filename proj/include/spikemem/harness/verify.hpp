#pragma once

#include "spikemem/blocks.hpp"
#include "spikemem/harness/experiments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spikemem::harness
{

struct verify_options
{
  blocks::block_kind kind = blocks::block_kind::decoder;
  and_kind and_type = and_kind::fast;
  /// Select inputs (decoder/mux/demux), one-hot inputs (encoder).
  int n = 2;
  int registers = 3;
  int bits = 2;
  int trials = 200;
  std::uint64_t seed = default_seed;
};

struct verify_report
{
  std::string title;
  std::vector<named_check> checks;
  int measured_latency_ms = -1;

  bool passed() const;
  std::string to_text() const;
};

/// A block wired to one fresh, silent spike source per input port. Sources
/// are named after the ports: s<i> for selects, d<i> for data lines, d for
/// the demultiplexer input, and store/data/data_not for the D latch.
struct standalone_block
{
  network net;
  std::vector<node_id> inputs;
  blocks::block_handle block;
};

/// Outputs are recorded. For the encoder `n` is the number of one-hot inputs;
/// the memory uses `registers` and `bits` instead of `n`.
standalone_block build_standalone( blocks::block_kind kind, and_kind and_type, int n = 2, int registers = 3,
                                   int bits = 2 );

/// Builds the block on fresh sources and measures the delay from one input
/// presentation (after warmup) to the first output response.
int measure_latency( blocks::block_kind kind, and_kind and_type, int n = 2, int registers = 3, int bits = 2 );

/// Exhaustive truth-table sweep (inputs small enough), seeded random
/// pipelined fuzzing against a boolean or sequential oracle, latency
/// measurement and resource reconciliation.
verify_report verify_block( verify_options const& options );

/// Presents `words` one per millisecond from t = 1 to a combinational block
/// (decoder, encoder, multiplexer, demultiplexer) and returns how many output
/// words disagree with the boolean oracle, along with a description of the
/// first disagreement.
struct sweep_result
{
  long words = 0;
  long mismatches = 0;
  std::string first_mismatch;
};
sweep_result sweep_combinational( blocks::block_kind kind, and_kind and_type, int n,
                                  std::vector<std::uint64_t> const& words );

/// Output word the block should produce for an input word. Input bit layout:
/// decoder s0..s(n-1); encoder d0..d(n-1); multiplexer s0..s(n-1) then
/// d0..d(2^n-1); demultiplexer s0..s(n-1) then d. Output bit layout follows
/// the block's output ports.
std::uint64_t combinational_oracle( blocks::block_kind kind, int n, std::uint64_t word );

/// Number of input bits of a combinational block.
int combinational_width( blocks::block_kind kind, int n );

} // namespace spikemem::harness
