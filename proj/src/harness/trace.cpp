#include "spikemem/harness/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace spikemem::harness
{

void trace::add_spikes( std::string name, std::vector<int> const& times, int valid_from )
{
  trace_row row{ std::move( name ), std::vector<std::string>( static_cast<std::size_t>( duration_ms ) ), false };
  for ( auto t : times )
  {
    if ( t >= valid_from && t >= 0 && t < duration_ms )
    {
      row.cells[t] = "1";
    }
  }
  rows.push_back( std::move( row ) );
}

void trace::add_derived( std::string name, std::vector<std::string> cells )
{
  cells.resize( static_cast<std::size_t>( duration_ms ) );
  rows.push_back( { std::move( name ), std::move( cells ), true } );
}

trace_row const* trace::find( std::string const& name ) const
{
  for ( auto const& r : rows )
  {
    if ( r.name == name )
    {
      return &r;
    }
  }
  return nullptr;
}

std::string const& trace::cell( std::string const& name, int t ) const
{
  auto const* row = find( name );
  if ( row == nullptr )
  {
    throw std::out_of_range( "trace has no row '" + name + "'" );
  }
  return row->cells.at( static_cast<std::size_t>( t ) );
}

std::string render_trace( trace const& tr, trace_style style )
{
  std::ostringstream os;
  std::size_t name_width = 1;
  for ( auto const& r : tr.rows )
  {
    name_width = std::max( name_width, r.name.size() );
  }

  if ( style == trace_style::raster )
  {
    for ( auto const& r : tr.rows )
    {
      os << r.name << ':';
      for ( int t = 0; t < tr.duration_ms; ++t )
      {
        auto const& c = r.cells[t];
        if ( c.empty() )
        {
          continue;
        }
        os << ' ' << t;
        if ( r.derived )
        {
          os << '=' << c;
        }
      }
      os << '\n';
    }
    return os.str();
  }

  std::vector<std::size_t> widths( static_cast<std::size_t>( tr.duration_ms ) );
  for ( int t = 0; t < tr.duration_ms; ++t )
  {
    widths[t] = std::to_string( t ).size();
    for ( auto const& r : tr.rows )
    {
      widths[t] = std::max( widths[t], r.cells[t].size() );
    }
  }
  auto pad = [&]( std::string const& s, std::size_t w ) { return std::string( w - s.size(), ' ' ) + s; };

  os << std::string( name_width - 1, ' ' ) << "t |";
  for ( int t = 0; t < tr.duration_ms; ++t )
  {
    os << ' ' << pad( std::to_string( t ), widths[t] );
  }
  os << '\n';
  for ( auto const& r : tr.rows )
  {
    os << r.name << std::string( name_width - r.name.size(), ' ' ) << " |";
    for ( int t = 0; t < tr.duration_ms; ++t )
    {
      os << ' ' << pad( r.cells[t], widths[t] );
    }
    os << '\n';
  }
  return os.str();
}

unsigned register_value( trace const& tr, std::vector<std::string> const& bit_rows, int t )
{
  unsigned value = 0;
  for ( std::size_t j = 0; j < bit_rows.size(); ++j )
  {
    if ( tr.spiked( bit_rows[j], t ) )
    {
      value |= 1u << j;
    }
  }
  return value;
}

std::string hex_cell( unsigned value )
{
  char buf[16];
  std::snprintf( buf, sizeof buf, "0x%X", value );
  return buf;
}

} // namespace spikemem::harness
