#pragma once

#include "spikemem/blocks.hpp"
#include "spikemem/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace spikemem::harness
{

/// Writes `signal,time_ms` rows (with header) sorted by time, then signal.
void write_spikes_csv( std::ostream& out, spike_record const& record, std::span<blocks::named_node const> signals );

/// {"duration_ms": D, "signals": {"name": [t, ...], ...}}
void write_spikes_json( std::ostream& out, spike_record const& record, std::span<blocks::named_node const> signals );

/// Opens `path` for writing, creating parent directories. Throws
/// std::runtime_error when the path is not writable.
std::ofstream open_output( std::filesystem::path const& path );

} // namespace spikemem::harness
