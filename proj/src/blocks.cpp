#include "spikemem/blocks.hpp"

#include <bit>

namespace spikemem::blocks
{

namespace
{

std::string indexed( char const* prefix, long i )
{
  return prefix + std::to_string( i );
}

void add_inputs( block_handle& h, char const* prefix, std::span<tap const> taps )
{
  for ( std::size_t i = 0; i < taps.size(); ++i )
  {
    h.inputs.push_back( { indexed( prefix, static_cast<long>( i ) ), taps[i].node } );
  }
}

void take_gate( block_handle& h, gates::gate_handle gate )
{
  h.owned.merge( gate.resources() );
  h.gates.push_back( std::move( gate ) );
}

void take_css( block_handle& h, gates::gate_handle const& css )
{
  h.owned.merge( css.resources() );
}

void check_selects( std::span<tap const> selects )
{
  if ( selects.empty() )
  {
    throw network_error( "block needs at least one select input" );
  }
  if ( selects.size() > 20 )
  {
    throw network_error( "too many select inputs" );
  }
}

/// NOT gates plus one AND per channel; `extra` supplies per-channel
/// additional AND inputs (data lines). Returns the AND gates in channel order.
template<typename Extra>
std::vector<gates::gate_handle> build_decoder_core( network& net, block_handle& h, std::span<tap const> selects,
                                                    and_kind kind, gates::gate_handle const& css,
                                                    std::string const& label, Extra&& extra )
{
  check_selects( selects );
  auto const n = static_cast<int>( selects.size() );
  auto const channels = 1L << n;

  std::vector<node_id> negated;
  for ( int b = 0; b < n; ++b )
  {
    auto gate = gates::build_not( net, css, { selects[b].node, selects[b].pad_ms, "Input to NOT" },
                                  label + ".not" + std::to_string( b ) );
    negated.push_back( gate.out() );
    take_gate( h, std::move( gate ) );
  }

  std::vector<gates::gate_handle> ands;
  for ( long j = 0; j < channels; ++j )
  {
    std::vector<tap> inputs;
    for ( int b = 0; b < n; ++b )
    {
      if ( ( j >> b ) & 1 )
      {
        inputs.push_back( { selects[b].node, selects[b].pad_ms + 1, "Input to AND" } );
      }
      else
      {
        inputs.push_back( { negated[b], 0, "NOT to AND" } );
      }
    }
    extra( j, inputs );
    auto gate = gates::build_and( net, kind, &css, inputs, label + ".and" + std::to_string( j ) );
    h.owned.merge( gate.resources() );
    ands.push_back( gate );
    h.gates.push_back( std::move( gate ) );
  }
  take_css( h, css );
  return ands;
}

void finish( network const& net, block_handle& h )
{
  h.resources = measure( net, h.owned );
}

} // namespace

char const* to_string( block_kind kind )
{
  switch ( kind )
  {
  case block_kind::decoder:
    return "decoder";
  case block_kind::encoder:
    return "encoder";
  case block_kind::multiplexer:
    return "multiplexer";
  case block_kind::demultiplexer:
    return "demultiplexer";
  case block_kind::d_latch:
    return "d-latch";
  case block_kind::memory:
    return "memory";
  }
  return "?";
}

block_kind parse_block_kind( std::string const& text )
{
  for ( auto kind : { block_kind::decoder, block_kind::encoder, block_kind::multiplexer, block_kind::demultiplexer,
                      block_kind::d_latch, block_kind::memory } )
  {
    if ( text == to_string( kind ) )
    {
      return kind;
    }
  }
  if ( text == "mux" )
  {
    return block_kind::multiplexer;
  }
  if ( text == "demux" )
  {
    return block_kind::demultiplexer;
  }
  if ( text == "dlatch" || text == "d_latch" )
  {
    return block_kind::d_latch;
  }
  throw std::invalid_argument( "unknown block '" + text + "'" );
}

node_id block_handle::output( std::string const& name ) const
{
  for ( auto const& p : outputs )
  {
    if ( p.name == name )
    {
      return p.node;
    }
  }
  throw network_error( std::string( "block " ) + to_string( kind ) + " has no output '" + name + "'" );
}

node_id block_handle::input( std::string const& name ) const
{
  for ( auto const& p : inputs )
  {
    if ( p.name == name )
    {
      return p.node;
    }
  }
  throw network_error( std::string( "block " ) + to_string( kind ) + " has no input '" + name + "'" );
}

int ceil_log2( long value )
{
  if ( value < 1 )
  {
    throw std::invalid_argument( "ceil_log2 needs a positive argument" );
  }
  return static_cast<int>( std::bit_width( static_cast<unsigned long>( value - 1 ) ) );
}

int memory_select_bits( int registers )
{
  return ceil_log2( static_cast<long>( registers ) + 1 );
}

std::string memory_output_name( int reg, int bit )
{
  return "q" + std::to_string( reg ) + "_" + std::to_string( bit );
}

block_handle build_decoder( network& net, std::span<tap const> selects, and_kind kind, gates::gate_handle const& css )
{
  block_handle h;
  h.kind = block_kind::decoder;
  h.and_type = kind;
  h.params.n = static_cast<int>( selects.size() );
  add_inputs( h, "s", selects );

  auto ands = build_decoder_core( net, h, selects, kind, css, "dec", []( long, std::vector<tap>& ) {} );
  for ( std::size_t j = 0; j < ands.size(); ++j )
  {
    h.outputs.push_back( { indexed( "ch", static_cast<long>( j ) ), ands[j].out() } );
  }
  h.latency_ms = 1 + ands.front().latency_ms;
  finish( net, h );
  return h;
}

block_handle build_encoder( network& net, std::span<tap const> data )
{
  if ( data.size() < 2 )
  {
    throw network_error( "encoder needs at least 2 inputs" );
  }
  block_handle h;
  h.kind = block_kind::encoder;
  h.params.n = static_cast<int>( data.size() );
  add_inputs( h, "d", data );

  auto const outputs = ceil_log2( static_cast<long>( data.size() ) );
  for ( int b = 0; b < outputs; ++b )
  {
    std::vector<tap> inputs;
    for ( std::size_t i = 1; i < data.size(); ++i )
    {
      if ( ( i >> b ) & 1 )
      {
        inputs.push_back( { data[i].node, data[i].pad_ms, "Input to OR" } );
      }
    }
    auto gate = gates::build_or( net, inputs, "enc.or" + std::to_string( b ) );
    h.outputs.push_back( { indexed( "or", b ), gate.out() } );
    take_gate( h, std::move( gate ) );
  }
  h.latency_ms = 1;
  finish( net, h );
  return h;
}

block_handle build_multiplexer( network& net, std::span<tap const> selects, std::span<tap const> data, and_kind kind,
                                gates::gate_handle const& css )
{
  check_selects( selects );
  if ( data.size() != ( std::size_t{ 1 } << selects.size() ) )
  {
    throw network_error( "multiplexer needs 2^n data inputs" );
  }
  block_handle h;
  h.kind = block_kind::multiplexer;
  h.and_type = kind;
  h.params.n = static_cast<int>( selects.size() );
  add_inputs( h, "s", selects );
  add_inputs( h, "d", data );

  auto ands = build_decoder_core( net, h, selects, kind, css, "mux", [&]( long j, std::vector<tap>& inputs ) {
    inputs.push_back( { data[j].node, data[j].pad_ms + 1, "Data to AND" } );
  } );
  std::vector<tap> collected;
  for ( auto const& a : ands )
  {
    collected.push_back( { a.out(), 0, "AND to OR" } );
  }
  auto out = gates::build_or( net, collected, "mux.or" );
  h.outputs.push_back( { "out", out.out() } );
  h.latency_ms = 1 + ands.front().latency_ms + out.latency_ms;
  take_gate( h, std::move( out ) );
  finish( net, h );
  return h;
}

block_handle build_demultiplexer( network& net, std::span<tap const> selects, tap data, and_kind kind,
                                  gates::gate_handle const& css )
{
  block_handle h;
  h.kind = block_kind::demultiplexer;
  h.and_type = kind;
  h.params.n = static_cast<int>( selects.size() );
  add_inputs( h, "s", selects );
  h.inputs.push_back( { "d", data.node } );

  auto ands = build_decoder_core( net, h, selects, kind, css, "demux", [&]( long, std::vector<tap>& inputs ) {
    inputs.push_back( { data.node, data.pad_ms + 1, "Data to AND" } );
  } );
  for ( std::size_t j = 0; j < ands.size(); ++j )
  {
    h.outputs.push_back( { indexed( "ch", static_cast<long>( j ) ), ands[j].out() } );
  }
  h.latency_ms = 1 + ands.front().latency_ms;
  finish( net, h );
  return h;
}

block_handle build_d_latch( network& net, d_latch_inputs const& in, and_kind kind, gates::gate_handle const* css,
                            std::string const& label )
{
  if ( css == nullptr && ( kind == and_kind::fast || !in.data_not ) )
  {
    throw network_error( "D latch requires a constant spike source" );
  }
  block_handle h;
  h.kind = block_kind::d_latch;
  h.and_type = kind;

  tap store = in.store;
  tap data = in.data;
  tap data_not;
  h.inputs.push_back( { "store", store.node } );
  h.inputs.push_back( { "data", data.node } );
  if ( in.data_not )
  {
    data_not = *in.data_not;
    h.inputs.push_back( { "data_not", data_not.node } );
  }
  else
  {
    auto inverter = gates::build_not( net, *css, { data.node, data.pad_ms, "Input to NOT" }, label + ".not" );
    data_not = { inverter.out(), 0 };
    store.pad_ms += 1;
    data.pad_ms += 1;
    h.input_offset_ms = 1;
    h.support.merge( inverter.resources() );
    h.gates.push_back( std::move( inverter ) );
  }
  store.category = "Store to AND";
  data.category = "Data to AND";
  data_not.category = "Data_not to AND";

  tap const set_inputs[] = { store, data };
  tap const reset_inputs[] = { store, data_not };
  auto set_and = gates::build_and( net, kind, css, set_inputs, label + ".and_set" );
  auto reset_and = gates::build_and( net, kind, css, reset_inputs, label + ".and_reset" );
  auto latch = gates::build_sr_latch( net, { set_and.out(), 0 }, { reset_and.out(), 0 }, label + ".sr" );

  for ( auto const* gate : { &set_and, &reset_and, &latch } )
  {
    auto owned = gate->resources();
    for ( auto s : owned.synapses )
    {
      if ( net.synapse_at( s ).category == "CSS to AND (fast)" )
      {
        h.support.synapses.insert( s );
      }
      else
      {
        h.owned.synapses.insert( s );
      }
    }
    h.owned.neurons.insert( owned.neurons.begin(), owned.neurons.end() );
  }
  h.latency_ms = set_and.latency_ms + latch.latency_ms;
  h.outputs.push_back( { "q", latch.out() } );
  h.gates.push_back( std::move( set_and ) );
  h.gates.push_back( std::move( reset_and ) );
  h.gates.push_back( std::move( latch ) );
  finish( net, h );
  return h;
}

block_handle build_memory( network& net, std::span<tap const> selects, std::span<tap const> data, int registers,
                           and_kind kind, gates::gate_handle const& css )
{
  if ( registers < 1 )
  {
    throw network_error( "memory needs at least one register" );
  }
  if ( data.empty() )
  {
    throw network_error( "memory needs at least one data bit" );
  }
  auto const n = memory_select_bits( registers );
  if ( static_cast<int>( selects.size() ) != n )
  {
    throw network_error( "memory with " + std::to_string( registers ) + " registers needs " + std::to_string( n ) +
                         " select inputs" );
  }
  auto const bits = static_cast<int>( data.size() );

  block_handle h;
  h.kind = block_kind::memory;
  h.and_type = kind;
  h.params = { n, registers, bits };
  add_inputs( h, "s", selects );
  add_inputs( h, "d", data );

  auto decoder = build_decoder( net, selects, kind, css );
  auto const decoder_latency = decoder.latency_ms;
  h.owned.merge( decoder.owned );

  std::vector<node_id> negated;
  for ( int j = 0; j < bits; ++j )
  {
    auto gate =
        gates::build_not( net, css, { data[j].node, data[j].pad_ms, "Data to NOT" }, "mem.not" + std::to_string( j ) );
    negated.push_back( gate.out() );
    take_gate( h, std::move( gate ) );
  }

  int latch_latency = 0;
  for ( int i = 1; i <= registers; ++i )
  {
    auto const store = decoder.output( indexed( "ch", i ) );
    for ( int j = 0; j < bits; ++j )
    {
      d_latch_inputs in{ { store, 0 },
                         { data[j].node, data[j].pad_ms + decoder_latency },
                         tap{ negated[j], decoder_latency - 1 } };
      auto latch = build_d_latch( net, in, kind, &css, "mem.r" + std::to_string( i ) + "b" + std::to_string( j ) );
      latch_latency = latch.latency_ms;
      h.owned.merge( latch.owned );
      h.owned.merge( latch.support );
      h.outputs.push_back( { memory_output_name( i, j ), latch.output( "q" ) } );
      h.children.push_back( std::move( latch ) );
    }
  }
  h.latency_ms = decoder_latency + latch_latency;
  h.children.insert( h.children.begin(), std::move( decoder ) );
  finish( net, h );
  return h;
}

} // namespace spikemem::blocks
