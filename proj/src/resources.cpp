#include "spikemem/resources.hpp"

#include <bit>
#include <sstream>

namespace spikemem::resources
{

using blocks::block_kind;

namespace
{

long pow2( long e )
{
  return 1L << e;
}

bool is_pow2( long v )
{
  return v > 0 && std::has_single_bit( static_cast<unsigned long>( v ) );
}

long clog2( long v )
{
  return blocks::ceil_log2( v );
}

void itemize_decoder( resource_report& rep, and_kind kind, long n )
{
  long const w = kind == and_kind::classic ? 2 : 1;
  long const ch = pow2( n );
  rep.add_neurons( "NOT", n );
  rep.add_neurons( "CSS", 2 );
  rep.add_synapses( "Input to NOT", n );
  rep.add_synapses( "CSS to NOT", 2 * n );
  rep.add_synapses( "Internal CSS", 2 );
  rep.add_synapses( "Input to AND", n * ( ch / 2 ) * w );
  rep.add_synapses( "NOT to AND", n * ( ch / 2 ) * w );
  if ( kind == and_kind::classic )
  {
    rep.add_neurons( "AND (classic)", 2 * ch );
    rep.add_synapses( "Internal AND (classic)", ch );
  }
  else
  {
    rep.add_neurons( "AND (fast)", ch );
    rep.add_synapses( "CSS to AND (fast)", 2 * ch );
  }
}

void itemize_d_latch( resource_report& rep, and_kind kind, long count )
{
  long const w = kind == and_kind::classic ? 2 : 1;
  if ( kind == and_kind::classic )
  {
    rep.add_neurons( "AND (classic)", 4 * count );
    rep.add_synapses( "Internal AND (classic)", 2 * count );
  }
  else
  {
    rep.add_neurons( "AND (fast)", 2 * count );
  }
  rep.add_neurons( "SR Latch", count );
  rep.add_synapses( "Store to AND", 2 * w * count );
  rep.add_synapses( "Data to AND", w * count );
  rep.add_synapses( "Data_not to AND", w * count );
  rep.add_synapses( "AND to SR Latch (set)", count );
  rep.add_synapses( "AND to SR Latch (reset)", count );
  rep.add_synapses( "Internal SR Latch", count );
}

/// Itemized breakdown for a block with n inputs (memory: n select bits,
/// r registers and c bits).
resource_report itemize( block_kind block, and_kind kind, long n, long r, long c )
{
  resource_report rep;
  long const w = kind == and_kind::classic ? 2 : 1;
  switch ( block )
  {
  case block_kind::decoder:
    itemize_decoder( rep, kind, n );
    break;
  case block_kind::encoder:
    rep.add_neurons( "OR", clog2( n ) );
    rep.add_synapses( "Input to OR", encoder_synapse_sum( n ) );
    break;
  case block_kind::multiplexer:
    itemize_decoder( rep, kind, n );
    rep.add_neurons( "OR", 1 );
    rep.add_synapses( "Data to AND", pow2( n ) * w );
    rep.add_synapses( "AND to OR", pow2( n ) );
    break;
  case block_kind::demultiplexer:
    itemize_decoder( rep, kind, n );
    rep.add_synapses( "Data to AND", pow2( n ) * w );
    break;
  case block_kind::d_latch:
    itemize_d_latch( rep, kind, 1 );
    break;
  case block_kind::memory:
    itemize_decoder( rep, kind, n );
    rep.add_neurons( "NOT", c );
    rep.add_synapses( "Data to NOT", c );
    rep.add_synapses( "CSS to NOT", 2 * c );
    itemize_d_latch( rep, kind, r * c );
    if ( kind == and_kind::fast )
    {
      rep.add_synapses( "CSS to AND (fast)", 4 * r * c );
    }
    break;
  }
  return rep;
}

struct totals
{
  long neurons;
  long synapses;
};

totals by_inputs( block_kind block, and_kind kind, long n, long c )
{
  bool const classic = kind == and_kind::classic;
  long const p = pow2( n );
  switch ( block )
  {
  case block_kind::decoder:
    return classic ? totals{ 2 * p + n + 2, p * ( 2 * n + 1 ) + 3 * n + 2 }
                   : totals{ p + n + 2, p * ( n + 2 ) + 3 * n + 2 };
  case block_kind::encoder:
    return { clog2( n ), encoder_synapse_sum( n ) };
  case block_kind::multiplexer:
    return classic ? totals{ 2 * p + n + 3, p * ( 2 * n + 4 ) + 3 * n + 2 }
                   : totals{ p + n + 3, p * ( n + 4 ) + 3 * n + 2 };
  case block_kind::demultiplexer:
    return classic ? totals{ 2 * p + n + 2, p * ( 2 * n + 3 ) + 3 * n + 2 }
                   : totals{ p + n + 2, p * ( n + 3 ) + 3 * n + 2 };
  case block_kind::d_latch:
    return classic ? totals{ 5, 13 } : totals{ 3, 7 };
  case block_kind::memory:
    return classic ? totals{ p * ( 5 * c + 2 ) + n - 4 * c + 2, p * ( 2 * n + 13 * c + 1 ) + 3 * n - 10 * c + 2 }
                   : totals{ p * ( 3 * c + 1 ) + n - 2 * c + 2, p * ( n + 11 * c + 2 ) + 3 * n - 8 * c + 2 };
  }
  return { 0, 0 };
}

totals by_outputs( block_kind block, and_kind kind, long m, long r, long c )
{
  bool const classic = kind == and_kind::classic;
  switch ( block )
  {
  case block_kind::decoder: {
    long const l = clog2( m );
    return classic ? totals{ 2 * m + l + 2, m + ( 2 * m + 3 ) * l + 2 } : totals{ m + l + 2, 2 * m + ( m + 3 ) * l + 2 };
  }
  case block_kind::encoder:
    throw unsupported_formula( "the encoder has no synapse formula in terms of its outputs" );
  case block_kind::multiplexer: {
    long const l = clog2( m );
    return classic ? totals{ 2 * m + l + 3, 4 * m + ( 2 * m + 3 ) * l + 2 }
                   : totals{ m + l + 3, 4 * m + ( m + 3 ) * l + 2 };
  }
  case block_kind::demultiplexer: {
    long const l = clog2( m );
    return classic ? totals{ 2 * m + l + 2, 3 * m + ( 2 * m + 3 ) * l + 2 }
                   : totals{ m + l + 2, 3 * m + ( m + 3 ) * l + 2 };
  }
  case block_kind::d_latch:
    return classic ? totals{ 5, 13 } : totals{ 3, 7 };
  case block_kind::memory: {
    long const l = clog2( r + 1 );
    return classic ? totals{ 2 * r + c + 5 * r * c + l + 4, r + 3 * c + 13 * r * c + ( 2 * r + 5 ) * l + 3 }
                   : totals{ r + c + 3 * r * c + l + 3, 2 * r + 3 * c + 11 * r * c + ( r + 4 ) * l + 4 };
  }
  }
  return { 0, 0 };
}

void check_query( formula_query const& q )
{
  auto bad = []( std::string const& why ) { throw std::invalid_argument( "invalid resource query: " + why ); };
  bool const inputs = q.form == parameter_form::by_inputs;
  switch ( q.kind )
  {
  case block_kind::decoder:
  case block_kind::multiplexer:
  case block_kind::demultiplexer:
    if ( inputs ? ( q.n < 1 || q.n > 30 ) : ( q.m < 2 || q.m > ( 1L << 30 ) ) )
    {
      bad( inputs ? "n must be in [1, 30]" : "m must be >= 2" );
    }
    break;
  case block_kind::encoder:
    if ( inputs ? q.n < 2 : q.m < 1 )
    {
      bad( inputs ? "encoder needs n >= 2" : "encoder needs m >= 1" );
    }
    break;
  case block_kind::d_latch:
    break;
  case block_kind::memory:
    if ( q.c < 1 )
    {
      bad( "memory needs c >= 1" );
    }
    if ( inputs ? ( q.n < 1 || q.n > 30 ) : q.r < 1 )
    {
      bad( inputs ? "n must be in [1, 30]" : "memory needs r >= 1" );
    }
    break;
  }
}

} // namespace

long encoder_synapse_sum( long inputs )
{
  if ( inputs < 2 )
  {
    throw std::invalid_argument( "encoder needs at least 2 inputs" );
  }
  long sum = 0;
  for ( long i = 2; i <= inputs; ++i )
  {
    sum += std::popcount( static_cast<unsigned long>( i - 1 ) );
  }
  return sum;
}

resource_report formula_resources( formula_query const& q )
{
  check_query( q );
  resource_report rep;
  if ( q.form == parameter_form::by_inputs )
  {
    auto const t = by_inputs( q.kind, q.and_type, q.n, q.c );
    long const r = q.kind == block_kind::memory ? pow2( q.n ) - 1 : 0;
    rep = itemize( q.kind, q.and_type, q.n, r, q.c );
    rep.neurons = t.neurons;
    rep.synapses = t.synapses;
    return rep;
  }

  if ( q.kind == block_kind::encoder )
  {
    // Only the neuron count is tabulated in terms of the outputs.
    rep.neurons = q.m;
    rep.neurons_by_category["OR"] = q.m;
    return rep;
  }
  auto const t = by_outputs( q.kind, q.and_type, q.m, q.r, q.c );
  bool const full = q.kind == block_kind::memory ? is_pow2( q.r + 1 ) : ( q.kind == block_kind::d_latch || is_pow2( q.m ) );
  if ( full )
  {
    long const n = q.kind == block_kind::memory ? clog2( q.r + 1 ) : ( q.kind == block_kind::d_latch ? 0 : clog2( q.m ) );
    rep = itemize( q.kind, q.and_type, n, q.r, q.c );
  }
  rep.neurons = t.neurons;
  rep.synapses = t.synapses;
  return rep;
}

int expected_latency( block_kind block, and_kind kind )
{
  bool const classic = kind == and_kind::classic;
  switch ( block )
  {
  case block_kind::decoder:
    return classic ? 3 : 2;
  case block_kind::encoder:
    return 1;
  case block_kind::multiplexer:
    return classic ? 4 : 3;
  case block_kind::demultiplexer:
    return classic ? 3 : 2;
  case block_kind::d_latch:
    return classic ? 3 : 2;
  case block_kind::memory:
    return classic ? 6 : 4;
  }
  return 0;
}

formula_query query_for( blocks::block_handle const& h, parameter_form form )
{
  formula_query q;
  q.kind = h.kind;
  q.and_type = h.and_type;
  q.form = form;
  q.n = h.params.n;
  if ( h.kind == block_kind::memory )
  {
    q.r = h.params.registers;
    q.c = h.params.bits;
  }
  else if ( h.kind == block_kind::encoder )
  {
    q.m = clog2( h.params.n );
  }
  else if ( h.kind != block_kind::d_latch )
  {
    q.m = pow2( h.params.n );
  }
  return q;
}

reconcile_result reconcile( blocks::block_handle const& h, formula_query const& q )
{
  auto mismatch = [&]( std::string const& what ) {
    throw std::invalid_argument( std::string( "reconcile: " ) + what + " of " + blocks::to_string( h.kind ) +
                                 " handle does not match the query" );
  };
  if ( q.kind != h.kind )
  {
    mismatch( "block kind" );
  }
  if ( h.kind != block_kind::encoder && q.and_type != h.and_type )
  {
    mismatch( "AND kind" );
  }
  bool const inputs = q.form == parameter_form::by_inputs;
  switch ( h.kind )
  {
  case block_kind::decoder:
  case block_kind::multiplexer:
  case block_kind::demultiplexer:
    if ( inputs ? q.n != h.params.n : q.m != pow2( h.params.n ) )
    {
      mismatch( inputs ? "n" : "m" );
    }
    break;
  case block_kind::encoder:
    if ( inputs ? q.n != h.params.n : q.m != clog2( h.params.n ) )
    {
      mismatch( inputs ? "n" : "m" );
    }
    break;
  case block_kind::d_latch:
    break;
  case block_kind::memory:
    if ( q.c != h.params.bits )
    {
      mismatch( "c" );
    }
    if ( inputs ? q.n != h.params.n : q.r != h.params.registers )
    {
      mismatch( inputs ? "n" : "r" );
    }
    if ( pow2( h.params.n ) - 1 != h.params.registers )
    {
      mismatch( "register count (closed forms assume r = 2^n - 1)" );
    }
    break;
  }

  reconcile_result result;
  result.measured = h.resources;
  result.expected = formula_resources( q );
  result.pass = result.measured.neurons == result.expected.neurons &&
                ( h.kind == block_kind::encoder && !inputs ? true
                                                           : result.measured.synapses == result.expected.synapses );

  auto diff = [&]( std::map<std::string, long> const& got, std::map<std::string, long> const& want ) {
    if ( want.empty() )
    {
      return;
    }
    std::map<std::string, std::pair<long, long>> merged;
    for ( auto const& [k, v] : got )
    {
      merged[k].first = v;
    }
    for ( auto const& [k, v] : want )
    {
      merged[k].second = v;
    }
    for ( auto const& [k, v] : merged )
    {
      if ( v.first != v.second )
      {
        result.mismatched_categories.push_back( k );
      }
    }
  };
  diff( result.measured.neurons_by_category, result.expected.neurons_by_category );
  if ( !( h.kind == block_kind::encoder && !inputs ) )
  {
    diff( result.measured.synapses_by_category, result.expected.synapses_by_category );
  }
  return result;
}

std::string reconcile_result::summary() const
{
  std::ostringstream os;
  os << ( pass ? "PASS" : "FAIL" ) << ": neurons " << measured.neurons << "/" << expected.neurons << ", synapses "
     << measured.synapses << "/" << expected.synapses;
  if ( !mismatched_categories.empty() )
  {
    os << "; mismatched categories:";
    for ( auto const& c : mismatched_categories )
    {
      os << " '" << c << "'";
    }
  }
  return os.str();
}

} // namespace spikemem::resources
