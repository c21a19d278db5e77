#include "spikemem/harness/verify.hpp"

#include "spikemem/resources.hpp"
#include "spikemem/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spikemem::harness
{

using blocks::block_kind;

namespace
{

constexpr int warmup_start = 1;
constexpr int latency_probe_time = 5;
constexpr int max_exhaustive_width = 20;

std::vector<tap> make_sources( network& net, std::vector<node_id>& inputs, char const* prefix, long count )
{
  std::vector<tap> taps;
  for ( long i = 0; i < count; ++i )
  {
    auto id = net.add_source( prefix + std::to_string( i ) );
    inputs.push_back( id );
    taps.push_back( { id, 0 } );
  }
  return taps;
}

std::string bits_text( std::uint64_t w, int width )
{
  std::string s;
  for ( int b = width - 1; b >= 0; --b )
  {
    s += ( ( w >> b ) & 1u ) ? '1' : '0';
  }
  return s;
}

int first_spike_at_or_after( spike_record const& rec, node_id id, int t0 )
{
  for ( auto t : rec.times( id ) )
  {
    if ( t >= t0 )
    {
      return t - t0;
    }
  }
  return -1;
}

named_check latency_check( block_kind kind, and_kind and_type, int measured )
{
  auto const expected = resources::expected_latency( kind, and_type );
  return { "latency", measured == expected,
           "measured " + std::to_string( measured ) + " ms, expected " + std::to_string( expected ) + " ms" };
}

named_check reconcile_check( blocks::block_handle const& h )
{
  if ( h.kind == block_kind::memory && ( 1 << h.params.n ) - 1 != h.params.registers )
  {
    return { "resources", true, "not applicable: closed forms assume r = 2^n - 1" };
  }
  auto res = resources::reconcile( h, resources::query_for( h ) );
  bool const ok = res.pass && res.mismatched_categories.empty();
  return { "resources", ok, res.summary() };
}

std::vector<int> random_schedule( std::mt19937_64& rng, int from, int to )
{
  std::vector<int> out;
  for ( int t = from; t < to; ++t )
  {
    if ( rng() & 1u )
    {
      out.push_back( t );
    }
  }
  return out;
}

verify_report verify_combinational( verify_options const& o )
{
  verify_report rep;
  auto const width = combinational_width( o.kind, o.n );
  if ( width <= max_exhaustive_width )
  {
    std::vector<std::uint64_t> words( std::size_t{ 1 } << width );
    std::iota( words.begin(), words.end(), std::uint64_t{ 0 } );
    auto sweep = sweep_combinational( o.kind, o.and_type, o.n, words );
    rep.checks.push_back( { "exhaustive truth table", sweep.mismatches == 0,
                            std::to_string( sweep.words - sweep.mismatches ) + "/" + std::to_string( sweep.words ) +
                                " words" + ( sweep.mismatches ? "; first mismatch: " + sweep.first_mismatch : "" ) } );
  }
  else
  {
    rep.checks.push_back( { "exhaustive truth table", true, "skipped: " + std::to_string( width ) + " input bits" } );
  }

  std::mt19937_64 rng( o.seed );
  std::uint64_t const mask = width >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << width ) - 1;
  std::vector<std::uint64_t> words( static_cast<std::size_t>( std::max( o.trials, 0 ) ) );
  for ( auto& w : words )
  {
    w = rng() & mask;
  }
  auto fuzz = sweep_combinational( o.kind, o.and_type, o.n, words );
  rep.checks.push_back( { "random pipelined words", fuzz.mismatches == 0 && fuzz.words > 0,
                          std::to_string( fuzz.words - fuzz.mismatches ) + "/" + std::to_string( fuzz.words ) +
                              " words (seed " + std::to_string( o.seed ) + ")" +
                              ( fuzz.mismatches ? "; first mismatch: " + fuzz.first_mismatch : "" ) } );

  rep.measured_latency_ms = measure_latency( o.kind, o.and_type, o.n );
  rep.checks.push_back( latency_check( o.kind, o.and_type, rep.measured_latency_ms ) );
  rep.checks.push_back( reconcile_check( build_standalone( o.kind, o.and_type, o.n ).block ) );
  return rep;
}

verify_report verify_d_latch( verify_options const& o )
{
  verify_report rep;
  std::mt19937_64 rng( o.seed );
  auto const steps = std::max( o.trials, 1 );

  // Standalone latch with independent store/data/data_not lines: SR semantics,
  // reset dominant.
  network net;
  auto store = net.add_source( "store", random_schedule( rng, warmup_start, warmup_start + steps ) );
  auto data = net.add_source( "data", random_schedule( rng, warmup_start, warmup_start + steps ) );
  auto data_not = net.add_source( "data_not", random_schedule( rng, warmup_start, warmup_start + steps ) );
  auto css = gates::build_css( net );
  auto latch = blocks::build_d_latch( net, { { store, 0 }, { data, 0 }, tap{ data_not, 0 } }, o.and_type, &css );
  auto q = latch.output( "q" );
  net.record( q );
  auto const lat = latch.latency_ms;
  auto const dur = warmup_start + steps + lat + 2;
  auto rec = run( net, dur );

  auto fired = [&]( node_id id, int t ) {
    auto const& s = net.source_at( id ).schedule;
    return std::binary_search( s.begin(), s.end(), t );
  };
  long agree = 0;
  long total = 0;
  std::string first;
  bool state = false;
  for ( int t = warmup_start + lat; t < dur; ++t )
  {
    int const cause = t - lat;
    if ( fired( store, cause ) )
    {
      if ( fired( data_not, cause ) )
      {
        state = false;
      }
      else if ( fired( data, cause ) )
      {
        state = true;
      }
    }
    ++total;
    if ( rec.fired_at( q, t ) == state )
    {
      ++agree;
    }
    else if ( first.empty() )
    {
      first = "q at t=" + std::to_string( t );
    }
  }
  rep.checks.push_back( { "set/reset oracle (external data_not)", agree == total,
                          std::to_string( agree ) + "/" + std::to_string( total ) + " timesteps" +
                              ( first.empty() ? "" : "; first mismatch: " + first ) } );

  // Six latches behind shared input NOTs: store ? data : hold.
  experiment_options eo;
  eo.and_type = o.and_type;
  eo.duration_ms = warmup_start + steps + 8;
  stimulus stim;
  stim["store"] = random_schedule( rng, warmup_start, warmup_start + steps );
  stim["data1"] = random_schedule( rng, warmup_start, warmup_start + steps );
  stim["data2"] = random_schedule( rng, warmup_start, warmup_start + steps );
  eo.stimulus_override = stim;
  auto exp = run_experiment( experiment_kind::d_latch, eo );
  for ( auto const& c : exp.checks )
  {
    rep.checks.push_back( { "store/data oracle (input NOT)", c.pass, c.detail } );
  }

  rep.measured_latency_ms = measure_latency( block_kind::d_latch, o.and_type );
  rep.checks.push_back( latency_check( block_kind::d_latch, o.and_type, rep.measured_latency_ms ) );
  rep.checks.push_back( reconcile_check( latch ) );
  return rep;
}

verify_report verify_memory( verify_options const& o )
{
  verify_report rep;
  auto const n = blocks::memory_select_bits( o.registers );
  auto const steps = std::max( o.trials, 1 );
  std::mt19937_64 rng( o.seed );

  experiment_options eo;
  eo.and_type = o.and_type;
  eo.registers = o.registers;
  eo.bits = o.bits;
  eo.duration_ms = warmup_start + steps + resources::expected_latency( block_kind::memory, o.and_type ) + 3;
  stimulus stim;
  std::vector<std::string> names;
  for ( int b = 0; b < n; ++b )
  {
    names.push_back( "s" + std::to_string( b ) );
  }
  for ( int j = 0; j < o.bits; ++j )
  {
    names.push_back( "d" + std::to_string( j ) );
  }
  for ( auto const& name : names )
  {
    stim[name];
  }
  for ( int t = warmup_start; t < warmup_start + steps; ++t )
  {
    auto const address = rng() & ( ( 1u << n ) - 1 );
    auto const word = rng() & ( ( 1u << o.bits ) - 1 );
    for ( int b = 0; b < n; ++b )
    {
      if ( ( address >> b ) & 1u )
      {
        stim["s" + std::to_string( b )].push_back( t );
      }
    }
    for ( int j = 0; j < o.bits; ++j )
    {
      if ( ( word >> j ) & 1u )
      {
        stim["d" + std::to_string( j )].push_back( t );
      }
    }
  }
  eo.stimulus_override = stim;
  auto exp = run_experiment( experiment_kind::memory, eo );
  for ( auto const& c : exp.checks )
  {
    rep.checks.push_back( { c.name + " (" + std::to_string( steps ) + " random writes)", c.pass, c.detail } );
  }

  rep.measured_latency_ms = measure_latency( block_kind::memory, o.and_type, 0, o.registers, o.bits );
  rep.checks.push_back( latency_check( block_kind::memory, o.and_type, rep.measured_latency_ms ) );
  rep.checks.push_back( reconcile_check( exp.setup.blocks.front() ) );
  return rep;
}

} // namespace

bool verify_report::passed() const
{
  return !checks.empty() && std::all_of( checks.begin(), checks.end(), []( auto const& c ) { return c.pass; } );
}

std::string verify_report::to_text() const
{
  std::ostringstream os;
  os << title << '\n';
  for ( auto const& c : checks )
  {
    os << "  [" << ( c.pass ? "PASS" : "FAIL" ) << "] " << c.name << ": " << c.detail << '\n';
  }
  os << ( passed() ? "PASS" : "FAIL" ) << '\n';
  return os.str();
}

standalone_block build_standalone( block_kind kind, and_kind and_type, int n, int registers, int bits )
{
  bool const uses_n = kind != block_kind::d_latch && kind != block_kind::memory;
  int const max_n = kind == block_kind::encoder ? 4096 : 16;
  if ( uses_n && ( n < 1 || n > max_n ) )
  {
    throw std::invalid_argument( "n must be in [1, " + std::to_string( max_n ) + "], got " + std::to_string( n ) );
  }
  standalone_block f;
  auto css = gates::build_css( f.net );
  switch ( kind )
  {
  case block_kind::decoder: {
    auto s = make_sources( f.net, f.inputs, "s", n );
    f.block = blocks::build_decoder( f.net, s, and_type, css );
    break;
  }
  case block_kind::encoder: {
    auto d = make_sources( f.net, f.inputs, "d", n );
    f.block = blocks::build_encoder( f.net, d );
    break;
  }
  case block_kind::multiplexer: {
    auto s = make_sources( f.net, f.inputs, "s", n );
    auto d = make_sources( f.net, f.inputs, "d", 1L << n );
    f.block = blocks::build_multiplexer( f.net, s, d, and_type, css );
    break;
  }
  case block_kind::demultiplexer: {
    auto s = make_sources( f.net, f.inputs, "s", n );
    auto d = f.net.add_source( "d" );
    f.inputs.push_back( d );
    f.block = blocks::build_demultiplexer( f.net, s, { d, 0 }, and_type, css );
    break;
  }
  case block_kind::d_latch: {
    auto store = f.net.add_source( "store" );
    auto data = f.net.add_source( "data" );
    auto data_not = f.net.add_source( "data_not" );
    f.inputs = { store, data, data_not };
    f.block = blocks::build_d_latch( f.net, { { store, 0 }, { data, 0 }, tap{ data_not, 0 } }, and_type, &css );
    break;
  }
  case block_kind::memory: {
    if ( registers < 1 || bits < 1 )
    {
      throw std::invalid_argument( "memory needs at least one register and one bit" );
    }
    auto s = make_sources( f.net, f.inputs, "s", blocks::memory_select_bits( registers ) );
    auto d = make_sources( f.net, f.inputs, "d", bits );
    f.block = blocks::build_memory( f.net, s, d, registers, and_type, css );
    break;
  }
  }
  for ( auto const& o : f.block.outputs )
  {
    f.net.record( o.node );
  }
  return f;
}

int combinational_width( block_kind kind, int n )
{
  switch ( kind )
  {
  case block_kind::decoder:
  case block_kind::encoder:
    return n;
  case block_kind::multiplexer:
    return n + ( 1 << n );
  case block_kind::demultiplexer:
    return n + 1;
  default:
    throw std::invalid_argument( std::string( to_string( kind ) ) + " is not a combinational block" );
  }
}

std::uint64_t combinational_oracle( block_kind kind, int n, std::uint64_t word )
{
  std::uint64_t const sel_mask = ( std::uint64_t{ 1 } << n ) - 1;
  switch ( kind )
  {
  case block_kind::decoder:
    return std::uint64_t{ 1 } << ( word & sel_mask );
  case block_kind::encoder: {
    std::uint64_t out = 0;
    for ( int i = 1; i < n; ++i )
    {
      if ( ( word >> i ) & 1u )
      {
        out |= static_cast<std::uint64_t>( i );
      }
    }
    return out;
  }
  case block_kind::multiplexer:
    return ( word >> ( n + ( word & sel_mask ) ) ) & 1u;
  case block_kind::demultiplexer:
    return ( ( word >> n ) & 1u ) << ( word & sel_mask );
  default:
    throw std::invalid_argument( std::string( to_string( kind ) ) + " is not a combinational block" );
  }
}

sweep_result sweep_combinational( block_kind kind, and_kind and_type, int n, std::vector<std::uint64_t> const& words )
{
  if ( kind == block_kind::d_latch || kind == block_kind::memory )
  {
    throw std::invalid_argument( std::string( to_string( kind ) ) + " is not a combinational block" );
  }
  auto f = build_standalone( kind, and_type, n );
  auto const count = static_cast<int>( words.size() );
  for ( std::size_t i = 0; i < f.inputs.size(); ++i )
  {
    f.net.set_schedule( f.inputs[i], schedule_where( warmup_start + count, [&]( int t ) {
                          return t >= warmup_start && ( ( words[t - warmup_start] >> i ) & 1u );
                        } ) );
  }
  auto const lat = f.block.latency_ms;
  auto const dur = warmup_start + count + lat + 1;
  auto rec = run( f.net, dur );

  std::vector<std::uint64_t> observed( static_cast<std::size_t>( dur ), 0 );
  for ( std::size_t k = 0; k < f.block.outputs.size(); ++k )
  {
    for ( auto t : rec.times( f.block.outputs[k].node ) )
    {
      observed[t] |= std::uint64_t{ 1 } << k;
    }
  }

  sweep_result res;
  auto const width = combinational_width( kind, n );
  auto const out_width = static_cast<int>( f.block.outputs.size() );
  for ( int k = 0; k < count; ++k )
  {
    auto const t = warmup_start + k;
    auto const want = combinational_oracle( kind, n, words[k] );
    auto const got = observed[t + lat];
    ++res.words;
    if ( got != want && res.mismatches++ == 0 )
    {
      res.first_mismatch = "input " + bits_text( words[k], width ) + " at t=" + std::to_string( t ) + " gave " +
                           bits_text( got, out_width ) + ", expected " + bits_text( want, out_width );
    }
  }
  return res;
}

int measure_latency( block_kind kind, and_kind and_type, int n, int registers, int bits )
{
  constexpr int t0 = latency_probe_time;
  constexpr int horizon = t0 + 20;
  network net;
  auto css = gates::build_css( net );
  auto src = [&]( std::string name, std::vector<int> sched ) { return net.add_source( std::move( name ), sched ); };

  node_id probe;
  switch ( kind )
  {
  case block_kind::decoder: {
    std::vector<tap> s;
    for ( int b = 0; b < n; ++b )
    {
      s.push_back( { src( "s" + std::to_string( b ), b == 0 ? std::vector<int>{ t0 } : std::vector<int>{} ), 0 } );
    }
    probe = blocks::build_decoder( net, s, and_type, css ).output( "ch1" );
    break;
  }
  case block_kind::encoder: {
    std::vector<tap> d;
    for ( int i = 0; i < std::max( n, 2 ); ++i )
    {
      d.push_back( { src( "d" + std::to_string( i ), i == 1 ? std::vector<int>{ t0 } : std::vector<int>{} ), 0 } );
    }
    probe = blocks::build_encoder( net, d ).output( "or0" );
    break;
  }
  case block_kind::multiplexer: {
    std::vector<tap> s, d;
    for ( int b = 0; b < n; ++b )
    {
      s.push_back( { src( "s" + std::to_string( b ), {} ), 0 } );
    }
    for ( int j = 0; j < ( 1 << n ); ++j )
    {
      d.push_back( { src( "d" + std::to_string( j ), j == 0 ? std::vector<int>{ t0 } : std::vector<int>{} ), 0 } );
    }
    probe = blocks::build_multiplexer( net, s, d, and_type, css ).output( "out" );
    break;
  }
  case block_kind::demultiplexer: {
    std::vector<tap> s;
    for ( int b = 0; b < n; ++b )
    {
      s.push_back( { src( "s" + std::to_string( b ), {} ), 0 } );
    }
    auto d = src( "d", { t0 } );
    probe = blocks::build_demultiplexer( net, s, { d, 0 }, and_type, css ).output( "ch0" );
    break;
  }
  case block_kind::d_latch: {
    auto store = src( "store", { t0 } );
    auto data = src( "data", { t0 } );
    auto data_not = src( "data_not", {} );
    probe = blocks::build_d_latch( net, { { store, 0 }, { data, 0 }, tap{ data_not, 0 } }, and_type, &css )
                .output( "q" );
    break;
  }
  case block_kind::memory: {
    auto const sel_bits = blocks::memory_select_bits( registers );
    std::vector<tap> s, d;
    for ( int b = 0; b < sel_bits; ++b )
    {
      s.push_back( { src( "s" + std::to_string( b ), b == 0 ? std::vector<int>{ t0 } : std::vector<int>{} ), 0 } );
    }
    for ( int j = 0; j < bits; ++j )
    {
      d.push_back( { src( "d" + std::to_string( j ), j == 0 ? std::vector<int>{ t0 } : std::vector<int>{} ), 0 } );
    }
    probe = blocks::build_memory( net, s, d, registers, and_type, css ).output( blocks::memory_output_name( 1, 0 ) );
    break;
  }
  }
  net.record( probe );
  return first_spike_at_or_after( run( net, horizon ), probe, t0 );
}

verify_report verify_block( verify_options const& o )
{
  verify_report rep;
  switch ( o.kind )
  {
  case block_kind::decoder:
  case block_kind::encoder:
  case block_kind::multiplexer:
  case block_kind::demultiplexer:
    rep = verify_combinational( o );
    break;
  case block_kind::d_latch:
    rep = verify_d_latch( o );
    break;
  case block_kind::memory:
    rep = verify_memory( o );
    break;
  }
  std::ostringstream title;
  title << "verify " << to_string( o.kind );
  if ( o.kind != block_kind::encoder )
  {
    title << " (" << to_string( o.and_type ) << " AND)";
  }
  switch ( o.kind )
  {
  case block_kind::memory:
    title << " r=" << o.registers << " c=" << o.bits;
    break;
  case block_kind::d_latch:
    break;
  case block_kind::encoder:
    title << " inputs=" << o.n;
    break;
  default:
    title << " n=" << o.n;
  }
  rep.title = title.str();
  return rep;
}

} // namespace spikemem::harness
