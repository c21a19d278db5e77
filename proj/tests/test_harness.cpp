#include "spikemem/harness/experiments.hpp"
#include "spikemem/harness/netlist.hpp"
#include "spikemem/harness/spike_io.hpp"
#include "spikemem/harness/stimulus.hpp"
#include "spikemem/harness/trace.hpp"
#include "spikemem/harness/verify.hpp"
#include "spikemem/resources.hpp"
#include "spikemem/simulator.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spikemem;
using namespace spikemem::harness;
using blocks::block_kind;

namespace
{

constexpr experiment_kind all_experiments[] = { experiment_kind::decoder_encoder, experiment_kind::mux_demux,
                                                experiment_kind::d_latch, experiment_kind::memory };

std::filesystem::path temp_dir( std::string const& name )
{
  auto dir = std::filesystem::temp_directory_path() / ( "spikemem_test_" + name );
  std::filesystem::remove_all( dir );
  return dir;
}

} // namespace

TEST( Stimulus, ParsesHeaderCommentsAndBlankLines )
{
  std::istringstream in( "signal,time_ms\n# comment\n\ns0,4\ns0,1\n d1 , 2 \n" );
  auto stim = parse_stimulus_csv( in );
  EXPECT_EQ( stim.at( "s0" ), ( std::vector<int>{ 1, 4 } ) );
  EXPECT_EQ( stim.at( "d1" ), ( std::vector<int>{ 2 } ) );
}

TEST( Stimulus, RejectsMalformedRows )
{
  for ( auto text : { "s0,-1\n", "s0,1\ns0,1\n", "s0\n", "s0,abc\n", ",3\n" } )
  {
    std::istringstream in( text );
    EXPECT_THROW( parse_stimulus_csv( in ), stimulus_error ) << text;
  }
}

TEST( Stimulus, ApplyRequiresKnownSources )
{
  network net;
  auto a = net.add_source( "a" );
  apply_stimulus( net, { { "a", { 1, 3 } } } );
  EXPECT_EQ( net.source_at( a ).schedule, ( std::vector<int>{ 1, 3 } ) );
  EXPECT_THROW( apply_stimulus( net, { { "b", { 1 } } } ), stimulus_error );
}

TEST( Stimulus, LoadsFromFile )
{
  auto stim = load_stimulus( std::filesystem::path( SPIKEMEM_TEST_DATA_DIR ) / "decoder_encoder_stimulus.csv" );
  EXPECT_EQ( stim.at( "s0" ), ( std::vector<int>{ 1, 3, 4 } ) );
  EXPECT_THROW( load_stimulus( "/nonexistent/stimulus.csv" ), stimulus_error );
}

TEST( SpikeIo, CsvRowsSortedByTimeThenSignal )
{
  network net;
  auto a = net.add_source( "A", { 2 } );
  auto b = net.add_source( "B", { 2, 3 } );
  net.record( b );
  net.record( a );
  auto rec = run( net, 5 );
  std::vector<blocks::named_node> signals{ { "B", b }, { "A", a } };
  std::ostringstream os;
  write_spikes_csv( os, rec, signals );
  EXPECT_EQ( os.str(), "signal,time_ms\nA,2\nB,2\nB,3\n" );
}

TEST( SpikeIo, CsvRoundTripsThroughStimulusParser )
{
  auto res = run_experiment( experiment_kind::decoder_encoder, {} );
  std::ostringstream os;
  write_spikes_csv( os, res.record, res.setup.signals );
  std::istringstream in( os.str() );
  auto parsed = parse_stimulus_csv( in );
  for ( auto const& s : res.setup.signals )
  {
    auto const& times = res.record.times( s.node );
    if ( times.empty() )
    {
      EXPECT_EQ( parsed.count( s.name ), 0u );
    }
    else
    {
      EXPECT_EQ( parsed.at( s.name ), times ) << s.name;
    }
  }
}

TEST( SpikeIo, JsonDocument )
{
  network net;
  auto a = net.add_source( "A", { 1, 4 } );
  net.record( a );
  auto rec = run( net, 6 );
  std::vector<blocks::named_node> signals{ { "A", a } };
  std::ostringstream os;
  write_spikes_json( os, rec, signals );
  auto doc = nlohmann::json::parse( os.str() );
  EXPECT_EQ( doc["duration_ms"], 6 );
  EXPECT_EQ( doc["signals"]["A"], nlohmann::json::array( { 1, 4 } ) );
}

TEST( SpikeIo, UnwritableOutputThrows )
{
  EXPECT_THROW( open_output( "/proc/spikemem/forbidden.csv" ), std::runtime_error );
  auto dir = temp_dir( "open_output" );
  auto out = open_output( dir / "nested" / "file.txt" );
  EXPECT_TRUE( out.good() );
  std::filesystem::remove_all( dir );
}

TEST( Trace, TableMarksSpikeColumns )
{
  trace tr;
  tr.duration_ms = 5;
  tr.add_spikes( "x", { 1, 3 } );
  EXPECT_EQ( render_trace( tr, trace_style::table ), "t | 0 1 2 3 4\nx |   1   1  \n" );
  EXPECT_EQ( render_trace( tr, trace_style::raster ), "x: 1 3\n" );
  EXPECT_TRUE( tr.spiked( "x", 3 ) );
  EXPECT_FALSE( tr.spiked( "x", 2 ) );
}

TEST( Trace, EmptyTraceRendersHeaderOnly )
{
  trace tr;
  tr.duration_ms = 3;
  EXPECT_EQ( render_trace( tr, trace_style::table ), "t | 0 1 2\n" );
}

TEST( Trace, WarmupMaskAndDerivedRows )
{
  trace tr;
  tr.duration_ms = 4;
  tr.add_spikes( "b0", { 0, 1, 2 }, 2 );
  tr.add_spikes( "b1", { 2, 3 } );
  tr.add_derived( "reg", { "", "", hex_cell( register_value( tr, { "b0", "b1" }, 2 ) ),
                           hex_cell( register_value( tr, { "b0", "b1" }, 3 ) ) } );
  EXPECT_EQ( tr.cell( "reg", 2 ), "0x3" );
  EXPECT_EQ( tr.cell( "reg", 3 ), "0x2" );
  EXPECT_EQ( tr.cell( "b0", 1 ), "" );
  EXPECT_EQ( render_trace( tr, trace_style::raster ), "b0: 2\nb1: 2 3\nreg: 2=0x3 3=0x2\n" );
  EXPECT_THROW( tr.cell( "missing", 0 ), std::out_of_range );
}

TEST( Netlist, DecoderExportListsFormulaNeuronCount )
{
  auto f = build_standalone( block_kind::decoder, and_kind::fast, 2 );
  auto doc = nlohmann::json::parse( export_netlist( { f.net, { annotate( f.block ) } } ) );
  EXPECT_EQ( doc["format"], netlist_format );
  EXPECT_EQ( doc["version"], netlist_version );
  EXPECT_EQ( doc["neurons"].size(), 8u );
  EXPECT_EQ( doc["blocks"][0]["kind"], "decoder" );
  EXPECT_EQ( doc["blocks"][0]["latency_ms"], 2 );
}

TEST( Netlist, RoundTripSimulatesIdentically )
{
  for ( auto kind : all_experiments )
  {
    auto setup = build_experiment( kind, {} );
    netlist_document doc{ setup.net, {} };
    for ( auto const& b : setup.blocks )
    {
      doc.blocks.push_back( annotate( b ) );
    }
    auto text = export_netlist( doc );
    auto back = import_netlist( text );
    EXPECT_EQ( export_netlist( back ), text );
    EXPECT_EQ( run_all( setup.net, setup.duration_ms ), run_all( back.net, setup.duration_ms ) ) << to_string( kind );
    EXPECT_EQ( run( setup.net, setup.duration_ms ), run( back.net, setup.duration_ms ) );
  }
}

TEST( Netlist, FileRoundTrip )
{
  auto dir = temp_dir( "netlist" );
  auto f = build_standalone( block_kind::memory, and_kind::classic, 0, 3, 2 );
  write_netlist( dir / "mem.json", { f.net, { annotate( f.block ) } } );
  auto back = read_netlist( dir / "mem.json" );
  ASSERT_EQ( back.blocks.size(), 1u );
  EXPECT_EQ( back.blocks[0].outputs.size(), f.block.outputs.size() );
  EXPECT_EQ( back.net.num_synapses(), f.net.num_synapses() );
  std::filesystem::remove_all( dir );
}

TEST( Netlist, RejectsMalformedDocuments )
{
  EXPECT_THROW( import_netlist( "not json" ), netlist_error );
  EXPECT_THROW( import_netlist( R"({"format":"other","version":1})" ), netlist_error );
  EXPECT_THROW( import_netlist( R"({"format":"spikemem-netlist","version":99})" ), netlist_error );
  auto f = build_standalone( block_kind::decoder, and_kind::fast, 1 );
  auto doc = nlohmann::json::parse( export_netlist( { f.net, {} } ) );
  doc["synapses"][0]["delay_ms"] = 0;
  EXPECT_THROW( import_netlist( doc.dump() ), std::exception );
  doc = nlohmann::json::parse( export_netlist( { f.net, {} } ) );
  doc["neurons"][1]["id"] = "n7";
  EXPECT_THROW( import_netlist( doc.dump() ), netlist_error );
}

TEST( Experiments, CanonicalRunsPassTheirChecks )
{
  for ( auto kind : all_experiments )
  {
    for ( auto k : { and_kind::classic, and_kind::fast } )
    {
      experiment_options o;
      o.and_type = k;
      auto res = run_experiment( kind, o );
      EXPECT_TRUE( res.passed() ) << to_string( kind ) << " " << to_string( k );
      EXPECT_FALSE( res.checks.empty() );
    }
  }
}

TEST( Experiments, DefaultAndKinds )
{
  EXPECT_EQ( build_experiment( experiment_kind::d_latch, {} ).and_type, and_kind::classic );
  EXPECT_EQ( build_experiment( experiment_kind::memory, {} ).and_type, and_kind::fast );
}

TEST( Experiments, NamesRoundTrip )
{
  for ( auto kind : all_experiments )
  {
    EXPECT_EQ( parse_experiment( to_string( kind ) ), kind );
  }
  EXPECT_THROW( parse_experiment( "adder" ), std::invalid_argument );
}

TEST( Experiments, UnknownStimulusSignalIsRejected )
{
  experiment_options o;
  o.stimulus_override = stimulus{ { "clock", { 1 } } };
  EXPECT_THROW( build_experiment( experiment_kind::d_latch, o ), stimulus_error );
}

TEST( Experiments, DecoderEncoderEchoesInputAfterThreeMilliseconds )
{
  auto res = run_experiment( experiment_kind::decoder_encoder, {} );
  for ( int b = 0; b < 2; ++b )
  {
    auto const& in = res.record.times( res.setup.net.find_source( "s" + std::to_string( b ) ).value() );
    std::vector<int> shifted;
    for ( auto t : in )
    {
      if ( t + 3 < res.setup.duration_ms )
      {
        shifted.push_back( t + 3 );
      }
    }
    EXPECT_EQ( res.tr.find( "or" + std::to_string( b ) ) != nullptr, true );
    std::vector<int> out;
    for ( int t = 0; t < res.setup.duration_ms; ++t )
    {
      if ( res.tr.spiked( "or" + std::to_string( b ), t ) )
      {
        out.push_back( t );
      }
    }
    EXPECT_EQ( out, shifted ) << "bit " << b;
  }
}

TEST( Experiments, SeedControlsMuxSegments )
{
  experiment_options a, b, c;
  b.seed = default_seed;
  c.seed = 99;
  auto sa = canonical_stimulus( experiment_kind::mux_demux, a );
  EXPECT_EQ( sa, canonical_stimulus( experiment_kind::mux_demux, b ) );
  EXPECT_NE( sa, canonical_stimulus( experiment_kind::mux_demux, c ) );
  // d1 fires at half the rate of d0.
  EXPECT_EQ( sa.at( "d0" ).size(), 2 * sa.at( "d1" ).size() );
}

TEST( Experiments, RenderedTracesAreStable )
{
  for ( auto kind : all_experiments )
  {
    auto a = run_experiment( kind, {} );
    auto b = run_experiment( kind, {} );
    EXPECT_EQ( render_trace( a.tr, trace_style::table ), render_trace( b.tr, trace_style::table ) );
  }
}

TEST( Verify, AllBlocksPassBothAndKinds )
{
  for ( auto b : { block_kind::decoder, block_kind::multiplexer, block_kind::demultiplexer, block_kind::d_latch,
                   block_kind::memory } )
  {
    for ( auto k : { and_kind::classic, and_kind::fast } )
    {
      verify_options o;
      o.kind = b;
      o.and_type = k;
      o.n = 3;
      auto rep = verify_block( o );
      EXPECT_TRUE( rep.passed() ) << rep.to_text();
      EXPECT_EQ( rep.measured_latency_ms, resources::expected_latency( b, k ) );
    }
  }
  verify_options enc;
  enc.kind = block_kind::encoder;
  enc.n = 8;
  EXPECT_TRUE( verify_block( enc ).passed() );
}

TEST( Verify, SweepCountsWords )
{
  std::vector<std::uint64_t> words{ 0, 1, 2, 3, 4, 5, 6, 7 };
  auto res = sweep_combinational( block_kind::decoder, and_kind::fast, 3, words );
  EXPECT_EQ( res.words, 8 );
  EXPECT_EQ( res.mismatches, 0 );
  auto demux = sweep_combinational( block_kind::demultiplexer, and_kind::classic, 2, words );
  EXPECT_EQ( demux.words, 8 );
  EXPECT_EQ( demux.mismatches, 0 );
  EXPECT_THROW( sweep_combinational( block_kind::memory, and_kind::fast, 2, words ), std::invalid_argument );
}

TEST( Verify, OracleDefinitions )
{
  EXPECT_EQ( combinational_oracle( block_kind::decoder, 2, 2 ), 4u );
  EXPECT_EQ( combinational_oracle( block_kind::encoder, 4, 0b0100 ), 2u );
  EXPECT_EQ( combinational_oracle( block_kind::encoder, 4, 0b0001 ), 0u );
  // mux n=2: select 3, d3 set
  EXPECT_EQ( combinational_oracle( block_kind::multiplexer, 2, 0b100011 ), 1u );
  EXPECT_EQ( combinational_oracle( block_kind::multiplexer, 2, 0b010011 ), 0u );
  EXPECT_EQ( combinational_oracle( block_kind::demultiplexer, 2, 0b101 ), 2u );
  EXPECT_EQ( combinational_width( block_kind::multiplexer, 2 ), 6 );
}
