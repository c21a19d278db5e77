#pragma once

#include "spikemem/network.hpp"

#include <string>
#include <vector>

namespace spikemem::harness
{

/// A named row over the time axis. Spike rows hold "1" or ""; derived rows
/// hold arbitrary short text (channel numbers, register hex values).
struct trace_row
{
  std::string name;
  std::vector<std::string> cells;
  bool derived = false;
};

struct trace
{
  int duration_ms = 0;
  std::vector<trace_row> rows;

  /// Adds a spike row; cells before `valid_from` are blanked (warmup mask).
  void add_spikes( std::string name, std::vector<int> const& times, int valid_from = 0 );
  void add_derived( std::string name, std::vector<std::string> cells );

  trace_row const* find( std::string const& name ) const;
  std::string const& cell( std::string const& name, int t ) const;
  bool spiked( std::string const& name, int t ) const { return cell( name, t ) == "1"; }
};

enum class trace_style
{
  table,
  raster
};

/// table: one row per signal, one fixed-width column per millisecond, a
/// header row of times. raster: `name: t t t` per spike row and
/// `name: t=value ...` per derived row.
std::string render_trace( trace const& tr, trace_style style );

/// Register value from its bit rows at time t (bit 0 first).
unsigned register_value( trace const& tr, std::vector<std::string> const& bit_rows, int t );

std::string hex_cell( unsigned value );

} // namespace spikemem::harness
