#include "spikemem/harness/experiments.hpp"

#include "spikemem/simulator.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spikemem::harness
{

using blocks::block_handle;
using blocks::named_node;

namespace
{

bool on( stimulus const& stim, std::string const& name, int t )
{
  auto it = stim.find( name );
  return it != stim.end() && std::binary_search( it->second.begin(), it->second.end(), t );
}

std::string idx( char const* prefix, long i )
{
  return prefix + std::to_string( i );
}

/// Word formed by signals prefix0, prefix1, ... at time t (bit 0 first).
unsigned word_at( stimulus const& stim, char const* prefix, int width, int t )
{
  unsigned w = 0;
  for ( int b = 0; b < width; ++b )
  {
    if ( on( stim, idx( prefix, b ), t ) )
    {
      w |= 1u << b;
    }
  }
  return w;
}

std::vector<tap> add_sources( network& net, std::vector<named_node>& signals, char const* prefix, long count )
{
  std::vector<tap> taps;
  for ( long i = 0; i < count; ++i )
  {
    auto name = idx( prefix, i );
    auto id = net.add_source( name );
    signals.push_back( { name, id } );
    taps.push_back( { id, 0 } );
  }
  return taps;
}

class check_builder
{
public:
  explicit check_builder( std::string name ) : name_( std::move( name ) ) {}

  void expect( bool ok, std::string const& what )
  {
    ++total_;
    if ( !ok && failures_++ == 0 )
    {
      first_ = what;
    }
  }

  named_check done() const
  {
    std::ostringstream os;
    os << ( total_ - failures_ ) << "/" << total_ << " agree";
    if ( failures_ > 0 )
    {
      os << "; first mismatch: " << first_;
    }
    return { name_, failures_ == 0 && total_ > 0, os.str() };
  }

private:
  std::string name_;
  int total_ = 0;
  int failures_ = 0;
  std::string first_;
};

std::string at( std::string const& what, int t )
{
  return what + " at t=" + std::to_string( t );
}

void check_stimulus_names( experiment_setup const& s, stimulus const& stim )
{
  for ( auto const& [name, times] : stim )
  {
    auto const* found = static_cast<named_node const*>( nullptr );
    for ( auto const& sig : s.signals )
    {
      if ( sig.name == name && sig.node.is_source() )
      {
        found = &sig;
      }
    }
    if ( found == nullptr )
    {
      throw stimulus_error( "stimulus signal '" + name + "' does not match any input port of the " +
                            to_string( s.kind ) + " experiment" );
    }
  }
}

void record_signals( experiment_setup& s )
{
  for ( auto const& sig : s.signals )
  {
    s.net.record( sig.node );
  }
}

// -- decoder -> encoder ----------------------------------------------------

void build_decoder_encoder( experiment_setup& s )
{
  auto const n = s.options.n;
  auto css = gates::build_css( s.net );
  auto selects = add_sources( s.net, s.signals, "s", n );
  auto dec = blocks::build_decoder( s.net, selects, s.and_type, css );
  std::vector<tap> channels;
  for ( auto const& ch : dec.outputs )
  {
    channels.push_back( { ch.node, 0 } );
    s.signals.push_back( ch );
  }
  auto enc = blocks::build_encoder( s.net, channels );
  for ( auto const& o : enc.outputs )
  {
    s.signals.push_back( o );
  }
  s.blocks = { dec, enc };
}

void evaluate_decoder_encoder( experiment_result& r )
{
  auto const& s = r.setup;
  auto const n = s.options.n;
  auto const ld = s.blocks[0].latency_ms;
  auto const le = s.blocks[1].latency_ms;
  auto const channels = 1 << n;

  for ( auto const& sig : s.signals )
  {
    int valid_from = 0;
    if ( sig.name.starts_with( "ch" ) )
    {
      valid_from = ld + 1;
    }
    else if ( sig.name.starts_with( "or" ) )
    {
      valid_from = ld + le + 1;
    }
    r.tr.add_spikes( sig.name, r.record.times( sig.node ), valid_from );
  }

  check_builder one_hot( "decoder one-hot output" );
  check_builder round_trip( "encoder reproduces decoder input" );
  for ( int t = 1; t + ld + le < s.duration_ms; ++t )
  {
    auto const word = word_at( s.applied, "s", n, t );
    for ( int j = 0; j < channels; ++j )
    {
      bool const fired = r.tr.spiked( idx( "ch", j ), t + ld );
      one_hot.expect( fired == ( static_cast<unsigned>( j ) == word ), at( idx( "ch", j ), t + ld ) );
    }
    for ( int b = 0; b < n; ++b )
    {
      bool const fired = r.tr.spiked( idx( "or", b ), t + ld + le );
      round_trip.expect( fired == ( ( word >> b ) & 1u ), at( idx( "or", b ), t + ld + le ) );
    }
  }
  r.checks = { one_hot.done(), round_trip.done() };
}

// -- multiplexer -> demultiplexer ------------------------------------------

void build_mux_demux( experiment_setup& s )
{
  auto const n = s.options.n;
  auto css = gates::build_css( s.net );
  auto selects = add_sources( s.net, s.signals, "s", n );
  auto data = add_sources( s.net, s.signals, "d", 1L << n );
  auto mux = blocks::build_multiplexer( s.net, selects, data, s.and_type, css );
  s.signals.push_back( mux.outputs.front() );

  // The demultiplexer sees the same controls, delayed to meet the mux output.
  auto delayed = selects;
  for ( auto& t : delayed )
  {
    t.pad_ms = mux.latency_ms;
  }
  auto demux = blocks::build_demultiplexer( s.net, delayed, { mux.output( "out" ), 0 }, s.and_type, css );
  for ( auto const& o : demux.outputs )
  {
    s.signals.push_back( o );
  }
  s.blocks = { mux, demux };
}

void evaluate_mux_demux( experiment_result& r )
{
  auto const& s = r.setup;
  auto const n = s.options.n;
  auto const lm = s.blocks[0].latency_ms;
  auto const ld = s.blocks[1].latency_ms;

  for ( auto const& sig : s.signals )
  {
    int valid_from = 0;
    if ( sig.name == "out" )
    {
      valid_from = lm + 1;
    }
    else if ( sig.name.starts_with( "ch" ) )
    {
      valid_from = lm + ld + 1;
    }
    r.tr.add_spikes( sig.name, r.record.times( sig.node ), valid_from );
  }

  check_builder mux_check( "multiplexer selects data line" );
  check_builder demux_check( "demultiplexer restores data lines" );
  for ( int t = 1; t + lm + ld < s.duration_ms; ++t )
  {
    auto const sel = word_at( s.applied, "s", n, t );
    mux_check.expect( r.tr.spiked( "out", t + lm ) == on( s.applied, idx( "d", sel ), t ), at( "out", t + lm ) );
    for ( int j = 0; j < ( 1 << n ); ++j )
    {
      bool const want = static_cast<unsigned>( j ) == sel && on( s.applied, idx( "d", j ), t );
      demux_check.expect( r.tr.spiked( idx( "ch", j ), t + lm + ld ) == want, at( idx( "ch", j ), t + lm + ld ) );
    }
  }
  r.checks = { mux_check.done(), demux_check.done() };
}

// -- D latches ------------------------------------------------------------

constexpr int latches_per_data = 3;

void build_d_latch_experiment( experiment_setup& s )
{
  auto css = gates::build_css( s.net );
  auto store = s.net.add_source( "store" );
  auto data1 = s.net.add_source( "data1" );
  auto data2 = s.net.add_source( "data2" );
  s.signals = { { "store", store }, { "data1", data1 }, { "data2", data2 } };
  auto not1 = gates::build_not( s.net, css, { data1, 0 }, "not1" );
  auto not2 = gates::build_not( s.net, css, { data2, 0 }, "not2" );
  s.signals.push_back( { "not1", not1.out() } );
  s.signals.push_back( { "not2", not2.out() } );

  for ( int k = 0; k < 2 * latches_per_data; ++k )
  {
    bool const first = k < latches_per_data;
    blocks::d_latch_inputs in{ { store, 1 }, { first ? data1 : data2, 1 }, tap{ ( first ? not1 : not2 ).out(), 0 } };
    auto latch = blocks::build_d_latch( s.net, in, s.and_type, &css, idx( "latch", k ) );
    latch.input_offset_ms = 1;
    s.signals.push_back( { idx( "latch", k ), latch.output( "q" ) } );
    s.blocks.push_back( std::move( latch ) );
  }
}

void evaluate_d_latch( experiment_result& r )
{
  auto const& s = r.setup;
  auto const delay = s.blocks.front().end_to_end_latency_ms();
  for ( auto const& sig : s.signals )
  {
    r.tr.add_spikes( sig.name, r.record.times( sig.node ), sig.name.starts_with( "not" ) ? 2 : 0 );
  }

  check_builder latch_check( "latches follow store/data oracle" );
  for ( int k = 0; k < 2 * latches_per_data; ++k )
  {
    auto const data = k < latches_per_data ? "data1" : "data2";
    bool state = false;
    for ( int t = 1; t < s.duration_ms; ++t )
    {
      int const cause = t - delay;
      if ( cause >= 1 && on( s.applied, "store", cause ) )
      {
        state = on( s.applied, data, cause );
      }
      latch_check.expect( r.tr.spiked( idx( "latch", k ), t ) == state, at( idx( "latch", k ), t ) );
    }
  }
  r.checks = { latch_check.done() };
}

// -- memory ---------------------------------------------------------------

void build_memory_experiment( experiment_setup& s )
{
  auto const r = s.options.registers;
  auto const c = s.options.bits;
  if ( r < 1 || c < 1 )
  {
    throw std::invalid_argument( "memory needs at least one register and one bit" );
  }
  auto const n = blocks::memory_select_bits( r );
  auto css = gates::build_css( s.net );
  auto selects = add_sources( s.net, s.signals, "s", n );
  auto data = add_sources( s.net, s.signals, "d", c );
  auto mem = blocks::build_memory( s.net, selects, data, r, s.and_type, css );
  for ( auto const& ch : mem.children.front().outputs )
  {
    s.signals.push_back( ch );
  }
  for ( auto const& q : mem.outputs )
  {
    s.signals.push_back( q );
  }
  s.blocks = { mem };
}

void evaluate_memory( experiment_result& r )
{
  auto const& s = r.setup;
  auto const& mem = s.blocks.front();
  auto const regs = mem.params.registers;
  auto const bits = mem.params.bits;
  auto const n = mem.params.n;
  auto const lat = mem.latency_ms;
  auto const ld = mem.children.front().latency_ms;
  auto const dur = s.duration_ms;

  trace raw;
  raw.duration_ms = dur;
  for ( auto const& sig : s.signals )
  {
    raw.add_spikes( sig.name, r.record.times( sig.node ) );
  }

  for ( int b = 0; b < n; ++b )
  {
    r.tr.add_spikes( idx( "s", b ), r.record.times( s.net.find_source( idx( "s", b ) ).value() ) );
  }
  for ( int j = 0; j < bits; ++j )
  {
    r.tr.add_spikes( idx( "d", j ), r.record.times( s.net.find_source( idx( "d", j ) ).value() ) );
  }

  std::vector<std::string> expected( dur ), decoded( dur );
  for ( int t = 0; t < dur; ++t )
  {
    if ( auto a = word_at( s.applied, "s", n, t ); a != 0 )
    {
      expected[t] = std::to_string( a );
    }
    if ( t >= ld + 1 )
    {
      for ( int j = 1; j < ( 1 << n ); ++j )
      {
        if ( raw.spiked( idx( "ch", j ), t ) )
        {
          decoded[t] = decoded[t].empty() ? std::to_string( j ) : decoded[t] + "+" + std::to_string( j );
        }
      }
    }
  }
  r.tr.add_derived( "Channel (Expected)", expected );
  r.tr.add_derived( "Channel (Decoder)", decoded );

  // Array-write oracle: the word presented with address a at t lands at t + latency.
  std::vector<std::vector<unsigned>> oracle( regs + 1, std::vector<unsigned>( dur, 0 ) );
  std::vector<unsigned> state( regs + 1, 0 );
  for ( int t = 0; t < dur; ++t )
  {
    int const cause = t - lat;
    if ( cause >= 1 )
    {
      auto const a = word_at( s.applied, "s", n, cause );
      if ( a >= 1 && a <= static_cast<unsigned>( regs ) )
      {
        state[a] = word_at( s.applied, "d", bits, cause );
      }
    }
    for ( int i = 1; i <= regs; ++i )
    {
      oracle[i][t] = state[i];
    }
  }

  check_builder reg_check( "registers match array-write oracle" );
  check_builder channel_check( "decoder selects the presented address" );
  for ( int i = 1; i <= regs; ++i )
  {
    std::vector<std::string> bit_rows;
    for ( int j = 0; j < bits; ++j )
    {
      bit_rows.push_back( blocks::memory_output_name( i, j ) );
    }
    std::vector<std::string> cells( dur );
    for ( int t = 0; t < dur; ++t )
    {
      auto const v = register_value( raw, bit_rows, t );
      cells[t] = hex_cell( v );
      reg_check.expect( v == oracle[i][t], at( "register " + std::to_string( i ) + " = " + hex_cell( v ) +
                                                   " (expected " + hex_cell( oracle[i][t] ) + ")",
                                               t ) );
    }
    r.tr.add_derived( "Register " + std::to_string( i ), cells );
  }
  for ( int t = 1; t + ld < dur; ++t )
  {
    auto const a = word_at( s.applied, "s", n, t );
    channel_check.expect( decoded[t + ld] == ( a == 0 ? "" : std::to_string( a ) ), at( "Channel (Decoder)", t + ld ) );
  }
  r.checks = { channel_check.done(), reg_check.done() };
}

} // namespace

char const* to_string( experiment_kind kind )
{
  switch ( kind )
  {
  case experiment_kind::decoder_encoder:
    return "decoder-encoder";
  case experiment_kind::mux_demux:
    return "mux-demux";
  case experiment_kind::d_latch:
    return "d-latch";
  case experiment_kind::memory:
    return "memory";
  }
  return "?";
}

experiment_kind parse_experiment( std::string const& text )
{
  for ( auto k : { experiment_kind::decoder_encoder, experiment_kind::mux_demux, experiment_kind::d_latch,
                   experiment_kind::memory } )
  {
    if ( text == to_string( k ) )
    {
      return k;
    }
  }
  throw std::invalid_argument( "unknown experiment '" + text +
                               "' (expected decoder-encoder, mux-demux, d-latch or memory)" );
}

bool experiment_result::passed() const
{
  return std::all_of( checks.begin(), checks.end(), []( auto const& c ) { return c.pass; } );
}

int default_duration( experiment_kind kind, experiment_options const& options )
{
  switch ( kind )
  {
  case experiment_kind::decoder_encoder:
    return 4 * ( 1 << options.n ) + 8;
  case experiment_kind::mux_demux:
    return 100;
  case experiment_kind::d_latch:
    return 16;
  case experiment_kind::memory:
    return 30;
  }
  return 0;
}

stimulus canonical_stimulus( experiment_kind kind, experiment_options const& options )
{
  auto const dur = options.duration_ms.value_or( default_duration( kind, options ) );
  stimulus stim;
  switch ( kind )
  {
  case experiment_kind::decoder_encoder: {
    auto const words = 1 << options.n;
    for ( int b = 0; b < options.n; ++b )
    {
      stim[idx( "s", b )] = schedule_where( dur, [&]( int t ) { return ( ( t % words ) >> b ) & 1; } );
    }
    break;
  }
  case experiment_kind::mux_demux: {
    auto const words = 1u << options.n;
    std::vector<int> const bounds = { 0, 10, 40, 60, 90 };
    std::vector<unsigned> values = { 0, words - 1 };
    std::mt19937_64 rng( options.seed );
    while ( values.size() < bounds.size() )
    {
      values.push_back( static_cast<unsigned>( rng() % words ) );
    }
    auto select_at = [&]( int t ) {
      std::size_t seg = 0;
      while ( seg + 1 < bounds.size() && t >= bounds[seg + 1] )
      {
        ++seg;
      }
      return values[seg];
    };
    for ( int b = 0; b < options.n; ++b )
    {
      stim[idx( "s", b )] = schedule_where( dur, [&]( int t ) { return ( select_at( t ) >> b ) & 1u; } );
    }
    for ( unsigned j = 0; j < words; ++j )
    {
      auto const period = 1L << j;
      stim[idx( "d", j )] = schedule_where( dur, [&]( int t ) { return t % period == 0; } );
    }
    break;
  }
  case experiment_kind::d_latch:
    stim["store"] = { 1, 2, 3, 6, 8 };
    stim["data1"] = { 1, 3, 4, 5, 6 };
    stim["data2"] = { 2, 3, 5, 6 };
    break;
  case experiment_kind::memory: {
    auto const n = blocks::memory_select_bits( options.registers );
    auto const cycle = options.registers + 1;
    auto const count = 1 << options.bits;
    for ( int b = 0; b < n; ++b )
    {
      stim[idx( "s", b )] = schedule_where( dur, [&]( int t ) { return ( ( t % cycle ) >> b ) & 1; } );
    }
    for ( int j = 0; j < options.bits; ++j )
    {
      stim[idx( "d", j )] = schedule_where( dur, [&]( int t ) { return ( ( t % count ) >> j ) & 1; } );
    }
    break;
  }
  }
  return stim;
}

experiment_setup build_experiment( experiment_kind kind, experiment_options const& options )
{
  experiment_setup s;
  s.kind = kind;
  s.options = options;
  s.and_type = options.and_type.value_or( kind == experiment_kind::d_latch ? and_kind::classic : and_kind::fast );
  s.duration_ms = options.duration_ms.value_or( default_duration( kind, options ) );
  if ( s.duration_ms < 1 )
  {
    throw std::invalid_argument( "duration must be >= 1 ms" );
  }
  if ( ( kind == experiment_kind::decoder_encoder || kind == experiment_kind::mux_demux ) &&
       ( options.n < 1 || options.n > 10 ) )
  {
    throw std::invalid_argument( "n must be in [1, 10]" );
  }
  if ( kind == experiment_kind::memory && ( options.registers < 1 || options.registers > 255 || options.bits < 1 ||
                                            options.bits > 16 ) )
  {
    throw std::invalid_argument( "memory needs 1..255 registers of 1..16 bits" );
  }

  switch ( kind )
  {
  case experiment_kind::decoder_encoder:
    build_decoder_encoder( s );
    break;
  case experiment_kind::mux_demux:
    build_mux_demux( s );
    break;
  case experiment_kind::d_latch:
    build_d_latch_experiment( s );
    break;
  case experiment_kind::memory:
    build_memory_experiment( s );
    break;
  }

  s.applied = options.stimulus_override ? *options.stimulus_override : canonical_stimulus( kind, options );
  check_stimulus_names( s, s.applied );
  // Sources missing from a user stimulus stay silent.
  for ( auto const& sig : s.signals )
  {
    if ( sig.node.is_source() )
    {
      s.applied.try_emplace( sig.name );
    }
  }
  apply_stimulus( s.net, s.applied );
  record_signals( s );
  return s;
}

experiment_result evaluate( experiment_setup setup )
{
  experiment_result r;
  r.record = run( setup.net, setup.duration_ms );
  r.setup = std::move( setup );
  r.tr.duration_ms = r.setup.duration_ms;
  switch ( r.setup.kind )
  {
  case experiment_kind::decoder_encoder:
    evaluate_decoder_encoder( r );
    break;
  case experiment_kind::mux_demux:
    evaluate_mux_demux( r );
    break;
  case experiment_kind::d_latch:
    evaluate_d_latch( r );
    break;
  case experiment_kind::memory:
    evaluate_memory( r );
    break;
  }
  return r;
}

experiment_result run_experiment( experiment_kind kind, experiment_options const& options )
{
  return evaluate( build_experiment( kind, options ) );
}

} // namespace spikemem::harness
