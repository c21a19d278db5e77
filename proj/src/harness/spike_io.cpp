#include "spikemem/harness/spike_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace spikemem::harness
{

void write_spikes_csv( std::ostream& out, spike_record const& record, std::span<blocks::named_node const> signals )
{
  std::vector<std::pair<int, std::string const*>> rows;
  for ( auto const& s : signals )
  {
    for ( auto t : record.times( s.node ) )
    {
      rows.emplace_back( t, &s.name );
    }
  }
  std::sort( rows.begin(), rows.end(), []( auto const& a, auto const& b ) {
    return std::tie( a.first, *a.second ) < std::tie( b.first, *b.second );
  } );
  out << "signal,time_ms\n";
  for ( auto const& [t, name] : rows )
  {
    out << *name << ',' << t << '\n';
  }
}

void write_spikes_json( std::ostream& out, spike_record const& record, std::span<blocks::named_node const> signals )
{
  nlohmann::ordered_json doc;
  doc["duration_ms"] = record.duration_ms;
  auto& sig = doc["signals"];
  sig = nlohmann::ordered_json::object();
  for ( auto const& s : signals )
  {
    sig[s.name] = record.times( s.node );
  }
  out << doc.dump( 2 ) << '\n';
}

std::ofstream open_output( std::filesystem::path const& path )
{
  std::error_code ec;
  if ( path.has_parent_path() )
  {
    std::filesystem::create_directories( path.parent_path(), ec );
  }
  std::ofstream out( path );
  if ( !out )
  {
    throw std::runtime_error( "cannot write " + path.string() );
  }
  return out;
}

} // namespace spikemem::harness
