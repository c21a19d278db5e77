#pragma once

#include "spikemem/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikemem::harness
{

class stimulus_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Signal name -> ascending spike times.
using stimulus = std::map<std::string, std::vector<int>>;

/// Reads `signal,time_ms` rows. A leading header row, blank lines and lines
/// starting with '#' are skipped. Times are sorted per signal; duplicates and
/// negative times are errors.
stimulus parse_stimulus_csv( std::istream& in );
stimulus load_stimulus( std::filesystem::path const& path );

/// Replaces the schedules of the named sources. Every signal must name an
/// existing source; sources not mentioned keep their schedules.
void apply_stimulus( network& net, stimulus const& stim );

/// Per-signal schedule built from a boolean predicate over [0, duration_ms).
template<typename Pred>
std::vector<int> schedule_where( int duration_ms, Pred&& pred )
{
  std::vector<int> out;
  for ( int t = 0; t < duration_ms; ++t )
  {
    if ( pred( t ) )
    {
      out.push_back( t );
    }
  }
  return out;
}

} // namespace spikemem::harness
