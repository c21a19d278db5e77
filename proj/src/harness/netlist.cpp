#include "spikemem/harness/netlist.hpp"

#include "spikemem/harness/spike_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace spikemem::harness
{

using json = nlohmann::ordered_json;

namespace
{

json ports_to_json( std::vector<blocks::named_node> const& ports )
{
  json out = json::object();
  for ( auto const& p : ports )
  {
    out[p.name] = p.node.str();
  }
  return out;
}

std::vector<blocks::named_node> ports_from_json( json const& j )
{
  std::vector<blocks::named_node> out;
  for ( auto const& [name, ref] : j.items() )
  {
    out.push_back( { name, node_id::parse( ref.get<std::string>() ) } );
  }
  return out;
}

} // namespace

block_annotation annotate( blocks::block_handle const& handle )
{
  return { blocks::to_string( handle.kind ), handle.kind == blocks::block_kind::encoder ? "" : to_string( handle.and_type ),
           handle.latency_ms, handle.inputs, handle.outputs };
}

std::string export_netlist( netlist_document const& doc )
{
  auto const& net = doc.net;
  json j;
  j["format"] = netlist_format;
  j["version"] = netlist_version;

  auto& neurons = j["neurons"] = json::array();
  for ( std::uint32_t i = 0; i < net.num_neurons(); ++i )
  {
    auto const& n = net.neurons()[i];
    neurons.push_back( { { "id", neuron_ref( i ).str() },
                         { "label", n.label },
                         { "category", n.category },
                         { "threshold_quanta", n.params.threshold_quanta },
                         { "refractory_ms", n.params.refractory_ms },
                         { "carryover_factor", n.params.carryover_factor } } );
  }
  auto& sources = j["sources"] = json::array();
  for ( std::uint32_t i = 0; i < net.num_sources(); ++i )
  {
    auto const& s = net.sources()[i];
    sources.push_back( { { "id", source_ref( i ).str() }, { "name", s.name }, { "schedule", s.schedule } } );
  }
  auto& synapses = j["synapses"] = json::array();
  for ( auto const& s : net.synapses() )
  {
    synapses.push_back( { { "source", s.source.str() },
                          { "target", s.target.str() },
                          { "weight_quanta", s.weight_quanta },
                          { "delay_ms", s.delay_ms },
                          { "category", s.category } } );
  }
  auto& recorded = j["recorded"] = json::array();
  for ( auto id : net.recorded() )
  {
    recorded.push_back( id.str() );
  }
  auto& annotations = j["blocks"] = json::array();
  for ( auto const& b : doc.blocks )
  {
    annotations.push_back( { { "kind", b.kind },
                             { "and", b.and_type },
                             { "latency_ms", b.latency_ms },
                             { "inputs", ports_to_json( b.inputs ) },
                             { "outputs", ports_to_json( b.outputs ) } } );
  }
  return j.dump( 1 ) + "\n";
}

netlist_document import_netlist( std::string const& text )
{
  json j;
  try
  {
    j = json::parse( text );
  }
  catch ( json::parse_error const& e )
  {
    throw netlist_error( std::string( "netlist is not valid JSON: " ) + e.what() );
  }
  if ( j.value( "format", "" ) != netlist_format )
  {
    throw netlist_error( "not a spikemem netlist" );
  }
  if ( j.value( "version", 0 ) != netlist_version )
  {
    throw netlist_error( "unsupported netlist version " + std::to_string( j.value( "version", 0 ) ) );
  }

  netlist_document doc;
  try
  {
    auto& net = doc.net;
    for ( auto const& n : j.at( "neurons" ) )
    {
      neuron_params p;
      p.threshold_quanta = n.at( "threshold_quanta" ).get<int>();
      p.refractory_ms = n.at( "refractory_ms" ).get<int>();
      p.carryover_factor = n.at( "carryover_factor" ).get<double>();
      auto id = net.add_neuron( p, n.value( "label", "" ), n.value( "category", "" ) );
      if ( id.str() != n.at( "id" ).get<std::string>() )
      {
        throw netlist_error( "neuron ids must be dense and in order" );
      }
    }
    for ( auto const& s : j.at( "sources" ) )
    {
      auto id = net.add_source( s.value( "name", "" ), s.at( "schedule" ).get<std::vector<int>>() );
      if ( id.str() != s.at( "id" ).get<std::string>() )
      {
        throw netlist_error( "source ids must be dense and in order" );
      }
    }
    for ( auto const& s : j.at( "synapses" ) )
    {
      net.connect( node_id::parse( s.at( "source" ).get<std::string>() ),
                   node_id::parse( s.at( "target" ).get<std::string>() ), s.at( "weight_quanta" ).get<int>(),
                   s.at( "delay_ms" ).get<int>(), s.value( "category", "" ) );
    }
    for ( auto const& r : j.value( "recorded", json::array() ) )
    {
      net.record( node_id::parse( r.get<std::string>() ) );
    }
    for ( auto const& b : j.value( "blocks", json::array() ) )
    {
      doc.blocks.push_back( { b.at( "kind" ).get<std::string>(), b.value( "and", "" ), b.value( "latency_ms", 0 ),
                              ports_from_json( b.at( "inputs" ) ), ports_from_json( b.at( "outputs" ) ) } );
    }
  }
  catch ( json::exception const& e )
  {
    throw netlist_error( std::string( "malformed netlist: " ) + e.what() );
  }
  catch ( network_error const& e )
  {
    throw netlist_error( std::string( "invalid netlist: " ) + e.what() );
  }
  return doc;
}

void write_netlist( std::filesystem::path const& path, netlist_document const& doc )
{
  auto out = open_output( path );
  out << export_netlist( doc );
}

netlist_document read_netlist( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw netlist_error( "cannot open netlist " + path.string() );
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return import_netlist( buffer.str() );
}

} // namespace spikemem::harness
