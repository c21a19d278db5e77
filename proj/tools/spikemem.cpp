// Command-line front end: experiments, verification sweeps, resource
// reconciliation and netlist export.

#include "spikemem/harness/experiments.hpp"
#include "spikemem/harness/netlist.hpp"
#include "spikemem/harness/spike_io.hpp"
#include "spikemem/harness/verify.hpp"
#include "spikemem/resources.hpp"
#include "spikemem/simulator.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace spikemem;
using namespace spikemem::harness;

namespace
{

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct cli_options
{
  std::string target;
  std::optional<std::string> and_type;
  int n = 2;
  std::optional<int> registers;
  std::optional<int> bits;
  std::optional<int> duration_ms;
  std::optional<std::string> stimulus_file;
  std::uint64_t seed = default_seed;
  int trials = 200;
  std::optional<std::string> out_dir;
  std::string format = "table";
};

void add_and_option( CLI::App* cmd, cli_options& o )
{
  cmd->add_option( "--and", o.and_type, "AND gate realization" )->check( CLI::IsMember( { "classic", "fast" } ) );
}

void add_size_options( CLI::App* cmd, cli_options& o )
{
  cmd->add_option( "--n", o.n, "select bits (encoder: number of one-hot inputs)" )->check( CLI::Range( 1, 16 ) );
  cmd->add_option( "--registers", o.registers, "memory registers" )->check( CLI::Range( 1, 1 << 12 ) );
  cmd->add_option( "--bits", o.bits, "bits per memory register" )->check( CLI::Range( 1, 64 ) );
}

experiment_options to_experiment_options( cli_options const& o )
{
  experiment_options eo;
  if ( o.and_type )
  {
    eo.and_type = parse_and_kind( *o.and_type );
  }
  eo.n = o.n;
  if ( o.registers )
  {
    eo.registers = *o.registers;
  }
  if ( o.bits )
  {
    eo.bits = *o.bits;
  }
  eo.duration_ms = o.duration_ms;
  eo.seed = o.seed;
  if ( o.stimulus_file )
  {
    eo.stimulus_override = load_stimulus( *o.stimulus_file );
  }
  return eo;
}

std::string checks_text( std::vector<named_check> const& checks )
{
  std::ostringstream os;
  for ( auto const& c : checks )
  {
    os << '[' << ( c.pass ? "PASS" : "FAIL" ) << "] " << c.name << ": " << c.detail << '\n';
  }
  return os.str();
}

std::string spikes_csv( spike_record const& rec, std::vector<blocks::named_node> const& signals )
{
  std::ostringstream os;
  write_spikes_csv( os, rec, signals );
  return os.str();
}

void write_file( fs::path const& path, std::string const& text )
{
  auto out = open_output( path );
  out << text;
  if ( !out )
  {
    throw std::runtime_error( "failed writing " + path.string() );
  }
}

netlist_document document_for( network const& net, std::vector<blocks::block_handle> const& handles )
{
  netlist_document doc{ net, {} };
  for ( auto const& h : handles )
  {
    doc.blocks.push_back( annotate( h ) );
  }
  return doc;
}

int cmd_run( cli_options const& o )
{
  auto const kind = parse_experiment( o.target );
  auto result = run_experiment( kind, to_experiment_options( o ) );
  auto const& signals = result.setup.signals;

  std::string rendered;
  if ( o.format == "csv" )
  {
    rendered = spikes_csv( result.record, signals );
  }
  else
  {
    rendered = render_trace( result.tr, o.format == "raster" ? trace_style::raster : trace_style::table );
  }
  std::cout << "experiment " << to_string( kind ) << " (" << to_string( result.setup.and_type ) << " AND, "
            << result.setup.duration_ms << " ms)\n"
            << rendered << checks_text( result.checks ) << ( result.passed() ? "PASS" : "FAIL" ) << '\n';

  if ( o.out_dir )
  {
    fs::path const dir( *o.out_dir );
    write_file( dir / "trace.txt", render_trace( result.tr, o.format == "raster" ? trace_style::raster
                                                                                 : trace_style::table ) );
    write_file( dir / "spikes.csv", spikes_csv( result.record, signals ) );
    {
      auto out = open_output( dir / "spikes.json" );
      write_spikes_json( out, result.record, signals );
    }
    write_file( dir / "checks.txt", checks_text( result.checks ) );
    write_netlist( dir / "netlist.json", document_for( result.setup.net, result.setup.blocks ) );
  }
  return result.passed() ? exit_pass : exit_fail;
}

std::vector<and_kind> and_kinds_for( cli_options const& o, blocks::block_kind kind )
{
  if ( o.and_type )
  {
    return { parse_and_kind( *o.and_type ) };
  }
  if ( kind == blocks::block_kind::encoder )
  {
    return { and_kind::fast };
  }
  return { and_kind::classic, and_kind::fast };
}

int cmd_verify( cli_options const& o )
{
  auto const kind = blocks::parse_block_kind( o.target );
  bool all = true;
  for ( auto k : and_kinds_for( o, kind ) )
  {
    verify_options vo;
    vo.kind = kind;
    vo.and_type = k;
    vo.n = o.n;
    vo.registers = o.registers.value_or( 3 );
    vo.bits = o.bits.value_or( 2 );
    vo.trials = o.trials;
    vo.seed = o.seed;
    auto rep = verify_block( vo );
    std::cout << rep.to_text();
    all = all && rep.passed();
  }
  return all ? exit_pass : exit_fail;
}

void print_resource_table( std::ostream& os, resource_report const& measured, resource_report const& expected,
                           bool csv )
{
  auto row = [&]( std::string const& kind, std::string const& name, long m, std::optional<long> e ) {
    if ( csv )
    {
      os << kind << ',' << name << ',' << m << ',' << ( e ? std::to_string( *e ) : "" ) << '\n';
    }
    else
    {
      os << "  " << std::left << std::setw( 9 ) << kind << std::setw( 28 ) << name << std::right << std::setw( 7 )
         << m << std::setw( 10 ) << ( e ? std::to_string( *e ) : "-" ) << ( e && *e != m ? "  mismatch" : "" )
         << '\n';
    }
  };
  auto lookup = []( std::map<std::string, long> const& m, std::string const& k ) -> std::optional<long> {
    auto it = m.find( k );
    return it == m.end() ? std::optional<long>{} : it->second;
  };
  auto rows = [&]( char const* kind, std::map<std::string, long> const& m, std::map<std::string, long> const& e ) {
    std::map<std::string, int> names;
    for ( auto const& [k, v] : m )
    {
      names[k];
    }
    for ( auto const& [k, v] : e )
    {
      names[k];
    }
    for ( auto const& [k, unused] : names )
    {
      row( kind, k, lookup( m, k ).value_or( 0 ),
           e.empty() ? std::optional<long>{} : std::optional<long>( lookup( e, k ).value_or( 0 ) ) );
    }
  };
  if ( csv )
  {
    os << "resource,category,measured,expected\n";
  }
  else
  {
    os << "  " << std::left << std::setw( 9 ) << "resource" << std::setw( 28 ) << "category" << std::right
       << std::setw( 7 ) << "measured" << std::setw( 10 ) << "expected" << '\n';
  }
  rows( "neuron", measured.neurons_by_category, expected.neurons_by_category );
  rows( "synapse", measured.synapses_by_category, expected.synapses_by_category );
  bool const has_expected = expected.neurons > 0;
  row( "neuron", "total", measured.neurons, has_expected ? std::optional<long>( expected.neurons ) : std::nullopt );
  row( "synapse", "total", measured.synapses, has_expected ? std::optional<long>( expected.synapses ) : std::nullopt );
}

int cmd_resources( cli_options const& o )
{
  if ( o.format == "raster" )
  {
    throw CLI::ValidationError( "--format", "resources supports table or csv" );
  }
  auto const kind = blocks::parse_block_kind( o.target );
  bool const csv = o.format == "csv";
  bool all = true;
  for ( auto k : and_kinds_for( o, kind ) )
  {
    auto f = build_standalone( kind, k, o.n, o.registers.value_or( 3 ), o.bits.value_or( 2 ) );
    auto const& h = f.block;
    if ( !csv )
    {
      std::cout << to_string( kind ) << " (" << to_string( k ) << " AND)";
      if ( kind == blocks::block_kind::memory )
      {
        std::cout << " r=" << h.params.registers << " c=" << h.params.bits;
      }
      else if ( kind != blocks::block_kind::d_latch )
      {
        std::cout << " n=" << h.params.n;
      }
      std::cout << ", latency " << h.latency_ms << " ms\n";
    }
    for ( auto form : { resources::parameter_form::by_inputs, resources::parameter_form::by_outputs } )
    {
      char const* form_name = form == resources::parameter_form::by_inputs ? "by inputs" : "by outputs";
      try
      {
        auto res = resources::reconcile( h, resources::query_for( h, form ) );
        if ( form == resources::parameter_form::by_inputs )
        {
          print_resource_table( std::cout, res.measured, res.expected, csv );
        }
        if ( !csv )
        {
          std::cout << "  closed form " << form_name << ": " << res.summary() << '\n';
        }
        all = all && res.pass;
      }
      catch ( std::invalid_argument const& e )
      {
        if ( form == resources::parameter_form::by_inputs )
        {
          print_resource_table( std::cout, h.resources, {}, csv );
        }
        if ( !csv )
        {
          std::cout << "  closed form " << form_name << ": not applicable (" << e.what() << ")\n";
        }
      }
    }
  }
  return all ? exit_pass : exit_fail;
}

int cmd_export( cli_options const& o )
{
  netlist_document doc;
  std::string text;
  try
  {
    auto const kind = blocks::parse_block_kind( o.target );
    auto const k = o.and_type ? parse_and_kind( *o.and_type ) : and_kind::fast;
    auto f = build_standalone( kind, k, o.n, o.registers.value_or( 3 ), o.bits.value_or( 2 ) );
    if ( o.stimulus_file )
    {
      apply_stimulus( f.net, load_stimulus( *o.stimulus_file ) );
    }
    doc = document_for( f.net, { f.block } );
  }
  catch ( std::invalid_argument const& )
  {
    auto setup = build_experiment( parse_experiment( o.target ), to_experiment_options( o ) );
    doc = document_for( setup.net, setup.blocks );
  }
  if ( o.out_dir )
  {
    write_netlist( fs::path( *o.out_dir ) / "netlist.json", doc );
  }
  else
  {
    std::cout << export_netlist( doc ) << '\n';
  }
  return exit_pass;
}

int cmd_simulate( cli_options const& o )
{
  auto doc = read_netlist( o.target );
  if ( o.stimulus_file )
  {
    apply_stimulus( doc.net, load_stimulus( *o.stimulus_file ) );
  }
  std::vector<blocks::named_node> signals;
  for ( auto id : doc.net.recorded() )
  {
    std::string name = id.kind == node_kind::source ? doc.net.source_at( id ).name : doc.net.neuron_at( id ).label;
    signals.push_back( { name.empty() ? id.str() : name, id } );
  }
  auto rec = run( doc.net, o.duration_ms.value_or( 32 ) );
  if ( o.format == "csv" )
  {
    std::cout << spikes_csv( rec, signals );
  }
  else
  {
    trace tr;
    tr.duration_ms = rec.duration_ms;
    for ( auto const& s : signals )
    {
      tr.add_spikes( s.name, rec.times( s.node ) );
    }
    std::cout << render_trace( tr, o.format == "raster" ? trace_style::raster : trace_style::table );
  }
  if ( o.out_dir )
  {
    write_file( fs::path( *o.out_dir ) / "spikes.csv", spikes_csv( rec, signals ) );
  }
  return exit_pass;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Spiking-network simulator and spiking memory circuit library" };
  app.require_subcommand( 1 );
  cli_options o;
  std::vector<std::string> const formats{ "table", "raster", "csv" };

  auto* run_cmd = app.add_subcommand( "run", "run an experiment: decoder-encoder, mux-demux, d-latch, memory" );
  auto* verify_cmd = app.add_subcommand( "verify", "oracle sweep of a block: decoder, encoder, mux, demux, d-latch, memory" );
  auto* res_cmd = app.add_subcommand( "resources", "measured and closed-form resource counts of a block" );
  auto* export_cmd = app.add_subcommand( "export", "write the netlist of a block or experiment" );
  auto* sim_cmd = app.add_subcommand( "simulate", "simulate an exported netlist" );

  run_cmd->add_option( "experiment", o.target )->required();
  verify_cmd->add_option( "block", o.target )->required();
  res_cmd->add_option( "block", o.target )->required();
  export_cmd->add_option( "target", o.target, "block or experiment name" )->required();
  sim_cmd->add_option( "netlist", o.target )->required()->check( CLI::ExistingFile );

  for ( auto* cmd : { run_cmd, verify_cmd, res_cmd, export_cmd } )
  {
    add_and_option( cmd, o );
    add_size_options( cmd, o );
  }
  for ( auto* cmd : { run_cmd, export_cmd } )
  {
    cmd->add_option( "--seed", o.seed, "seed for random control schedules" );
    cmd->add_option( "--duration-ms", o.duration_ms, "simulated duration" )->check( CLI::PositiveNumber );
  }
  sim_cmd->add_option( "--duration-ms", o.duration_ms, "simulated duration" )->check( CLI::PositiveNumber );
  verify_cmd->add_option( "--seed", o.seed, "fuzzing seed" );
  verify_cmd->add_option( "--trials", o.trials, "random words or writes" )->check( CLI::Range( 1, 1000000 ) );
  for ( auto* cmd : { run_cmd, export_cmd, sim_cmd } )
  {
    cmd->add_option( "--stimulus", o.stimulus_file, "CSV of signal,time_ms rows" )->check( CLI::ExistingFile );
  }
  for ( auto* cmd : { run_cmd, export_cmd, sim_cmd } )
  {
    cmd->add_option( "--out", o.out_dir, "output directory" );
  }
  for ( auto* cmd : { run_cmd, res_cmd, sim_cmd } )
  {
    cmd->add_option( "--format", o.format )->check( CLI::IsMember( formats ) );
  }

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? exit_pass : exit_usage;
  }

  try
  {
    if ( *run_cmd )
    {
      return cmd_run( o );
    }
    if ( *verify_cmd )
    {
      return cmd_verify( o );
    }
    if ( *res_cmd )
    {
      return cmd_resources( o );
    }
    if ( *export_cmd )
    {
      return cmd_export( o );
    }
    return cmd_simulate( o );
  }
  catch ( CLI::Error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}
