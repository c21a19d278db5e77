#pragma once

#include "spikemem/blocks.hpp"
#include "spikemem/harness/stimulus.hpp"
#include "spikemem/harness/trace.hpp"
#include "spikemem/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spikemem::harness
{

enum class experiment_kind
{
  decoder_encoder,
  mux_demux,
  d_latch,
  memory
};

char const* to_string( experiment_kind kind );
experiment_kind parse_experiment( std::string const& text );

/// Seed for the multiplexer experiment's random control segments.
inline constexpr std::uint64_t default_seed = 2023;

struct experiment_options
{
  /// Defaults to classic for the D latch experiment and fast elsewhere.
  std::optional<and_kind> and_type;
  int n = 2;
  int registers = 3;
  int bits = 3;
  std::optional<int> duration_ms;
  std::uint64_t seed = default_seed;
  /// Replaces the canonical stimulus when present.
  std::optional<stimulus> stimulus_override;
};

struct named_check
{
  std::string name;
  bool pass = false;
  std::string detail;
};

/// A constructed but not yet simulated experiment.
struct experiment_setup
{
  experiment_kind kind = experiment_kind::decoder_encoder;
  and_kind and_type = and_kind::fast;
  experiment_options options;
  network net;
  /// Recorded signals in trace order: inputs first, then outputs.
  std::vector<blocks::named_node> signals;
  std::vector<blocks::block_handle> blocks;
  stimulus applied;
  int duration_ms = 0;
};

struct experiment_result
{
  experiment_setup setup;
  spike_record record;
  trace tr;
  std::vector<named_check> checks;

  bool passed() const;
};

/// The default stimulus for an experiment: an ascending binary count for the
/// decoder-encoder chain; a piecewise-constant control schedule (changes at
/// 10, 40, 60 and 90 ms) with data line d_j firing every 2^j ms for the
/// multiplexer chain; a fixed store/data schedule over six latches; and an
/// address cycle with an ascending data count for the memory.
stimulus canonical_stimulus( experiment_kind kind, experiment_options const& options );

int default_duration( experiment_kind kind, experiment_options const& options );

/// Builds the network, applies the stimulus and records the signals.
/// Throws stimulus_error for unknown signal names, std::invalid_argument for
/// invalid sizes.
experiment_setup build_experiment( experiment_kind kind, experiment_options const& options );

/// Simulates a setup, renders its trace and evaluates the oracle checks.
experiment_result evaluate( experiment_setup setup );

experiment_result run_experiment( experiment_kind kind, experiment_options const& options );

} // namespace spikemem::harness
