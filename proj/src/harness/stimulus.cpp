#include "spikemem/harness/stimulus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

namespace spikemem::harness
{

namespace
{

std::string trim( std::string const& s )
{
  auto const first = s.find_first_not_of( " \t\r" );
  if ( first == std::string::npos )
  {
    return {};
  }
  auto const last = s.find_last_not_of( " \t\r" );
  return s.substr( first, last - first + 1 );
}

} // namespace

stimulus parse_stimulus_csv( std::istream& in )
{
  stimulus stim;
  std::string line;
  int line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    line = trim( line );
    if ( line.empty() || line[0] == '#' )
    {
      continue;
    }
    auto const comma = line.find( ',' );
    if ( comma == std::string::npos )
    {
      throw stimulus_error( "line " + std::to_string( line_no ) + ": expected 'signal,time_ms'" );
    }
    auto name = trim( line.substr( 0, comma ) );
    auto time_text = trim( line.substr( comma + 1 ) );
    if ( line_no == 1 && name == "signal" && time_text == "time_ms" )
    {
      continue;
    }
    int t = 0;
    auto [ptr, ec] = std::from_chars( time_text.data(), time_text.data() + time_text.size(), t );
    if ( name.empty() || ec != std::errc{} || ptr != time_text.data() + time_text.size() )
    {
      throw stimulus_error( "line " + std::to_string( line_no ) + ": malformed row '" + line + "'" );
    }
    if ( t < 0 )
    {
      throw stimulus_error( "line " + std::to_string( line_no ) + ": negative spike time" );
    }
    stim[name].push_back( t );
  }
  for ( auto& [name, times] : stim )
  {
    std::sort( times.begin(), times.end() );
    if ( std::adjacent_find( times.begin(), times.end() ) != times.end() )
    {
      throw stimulus_error( "signal '" + name + "' lists the same spike time twice" );
    }
  }
  return stim;
}

stimulus load_stimulus( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw stimulus_error( "cannot open stimulus file " + path.string() );
  }
  return parse_stimulus_csv( in );
}

void apply_stimulus( network& net, stimulus const& stim )
{
  for ( auto const& [name, times] : stim )
  {
    auto id = net.find_source( name );
    if ( !id )
    {
      throw stimulus_error( "stimulus signal '" + name + "' does not match any input port" );
    }
    net.set_schedule( *id, times );
  }
}

} // namespace spikemem::harness
