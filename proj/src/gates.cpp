#include "spikemem/gates.hpp"

namespace spikemem
{

char const* to_string( and_kind kind )
{
  return kind == and_kind::classic ? "classic" : "fast";
}

and_kind parse_and_kind( std::string const& text )
{
  if ( text == "classic" )
  {
    return and_kind::classic;
  }
  if ( text == "fast" )
  {
    return and_kind::fast;
  }
  throw std::invalid_argument( "unknown AND kind '" + text + "' (expected classic or fast)" );
}

namespace gates
{

namespace
{

std::string or_default( std::string const& category, char const* fallback )
{
  return category.empty() ? fallback : category;
}

void require_css( gate_handle const& css )
{
  if ( css.kind != gate_kind::css )
  {
    throw network_error( "gate requires a constant spike source" );
  }
}

void hook_css( network& net, gate_handle& gate, gate_handle const& css, node_id target, int weight,
               char const* category )
{
  for ( auto const* phase : { "phase_a", "phase_b" } )
  {
    gate.owned_synapses.push_back( net.connect( css.ports.output( phase ), target, weight, 1, category ) );
  }
}

void wire_input( network& net, gate_handle& gate, std::string const& port, tap const& in, node_id target,
                 int weight, int delay, char const* default_category )
{
  if ( in.pad_ms < 0 )
  {
    throw network_error( "input padding must be >= 0" );
  }
  auto const total_delay = delay + in.pad_ms;
  auto id = net.connect( in.node, target, weight, total_delay, or_default( in.category, default_category ) );
  gate.ports.inputs[port].push_back( { target, weight, total_delay, id } );
}

} // namespace

char const* to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::css:
    return "css";
  case gate_kind::not_gate:
    return "not";
  case gate_kind::or_gate:
    return "or";
  case gate_kind::and_classic:
    return "and_classic";
  case gate_kind::and_fast:
    return "and_fast";
  case gate_kind::sr_latch:
    return "sr_latch";
  }
  return "?";
}

node_id port_map::output( std::string const& name ) const
{
  auto it = outputs.find( name );
  if ( it == outputs.end() )
  {
    throw network_error( "no output port '" + name + "'" );
  }
  return it->second;
}

node_id gate_handle::out() const
{
  return ports.output( kind == gate_kind::sr_latch ? "q" : "out" );
}

ownership gate_handle::resources() const
{
  ownership owned;
  owned.neurons.insert( owned_neurons.begin(), owned_neurons.end() );
  owned.synapses.insert( owned_synapses.begin(), owned_synapses.end() );
  for ( auto const& [name, descriptors] : ports.inputs )
  {
    for ( auto const& d : descriptors )
    {
      owned.synapses.insert( d.synapse );
    }
  }
  return owned;
}

gate_handle build_css( network& net, std::string const& label )
{
  gate_handle css;
  css.kind = gate_kind::css;
  css.latency_ms = 1;

  auto a = net.add_neuron( {}, label + ".a", "CSS" );
  auto b = net.add_neuron( {}, label + ".b", "CSS" );
  auto boot = net.add_source( {}, { 0 } );
  css.owned_neurons = { a.index, b.index };
  css.owned_sources = { boot };
  css.owned_synapses.push_back( net.connect( boot, a, 1, 1, css_bootstrap_category ) );
  css.owned_synapses.push_back( net.connect( a, b, 1, 1, "Internal CSS" ) );
  css.owned_synapses.push_back( net.connect( b, a, 1, 1, "Internal CSS" ) );
  css.ports.outputs["phase_a"] = a;
  css.ports.outputs["phase_b"] = b;
  return css;
}

gate_handle build_not( network& net, gate_handle const& css, tap in, std::string const& label )
{
  require_css( css );
  gate_handle gate;
  gate.kind = gate_kind::not_gate;
  gate.latency_ms = 1;

  auto out = net.add_neuron( {}, label, "NOT" );
  gate.owned_neurons = { out.index };
  hook_css( net, gate, css, out, 1, "CSS to NOT" );
  wire_input( net, gate, "in", in, out, -1, 1, "Input to NOT" );
  gate.ports.outputs["out"] = out;
  return gate;
}

gate_handle build_or( network& net, std::span<tap const> inputs, std::string const& label )
{
  if ( inputs.empty() )
  {
    throw network_error( "OR gate needs fan-in >= 1" );
  }
  gate_handle gate;
  gate.kind = gate_kind::or_gate;
  gate.latency_ms = 1;

  auto out = net.add_neuron( {}, label, "OR" );
  gate.owned_neurons = { out.index };
  for ( std::size_t i = 0; i < inputs.size(); ++i )
  {
    wire_input( net, gate, "in" + std::to_string( i ), inputs[i], out, 1, 1, "Input to OR" );
  }
  gate.ports.outputs["out"] = out;
  return gate;
}

gate_handle build_and_classic( network& net, std::span<tap const> inputs, std::string const& label )
{
  if ( inputs.empty() )
  {
    throw network_error( "AND gate needs fan-in >= 1" );
  }
  auto const k = static_cast<int>( inputs.size() );
  gate_handle gate;
  gate.kind = gate_kind::and_classic;
  gate.latency_ms = 2;

  auto collector = net.add_neuron( {}, label + ".x", "AND (classic)" );
  auto out = net.add_neuron( {}, label + ".y", "AND (classic)" );
  gate.owned_neurons = { collector.index, out.index };
  gate.owned_synapses.push_back( net.connect( collector, out, -( 2 * k - 1 ), 1, "Internal AND (classic)" ) );
  for ( int i = 0; i < k; ++i )
  {
    auto port = "in" + std::to_string( i );
    wire_input( net, gate, port, inputs[i], collector, 1, 1, "Input to AND" );
    wire_input( net, gate, port, inputs[i], out, 2, 2, "Input to AND" );
  }
  gate.ports.outputs["out"] = out;
  return gate;
}

gate_handle build_and_fast( network& net, gate_handle const& css, std::span<tap const> inputs, std::string const& label )
{
  require_css( css );
  if ( inputs.empty() )
  {
    throw network_error( "AND gate needs fan-in >= 1" );
  }
  auto const k = static_cast<int>( inputs.size() );
  gate_handle gate;
  gate.kind = gate_kind::and_fast;
  gate.latency_ms = 1;

  auto out = net.add_neuron( {}, label, "AND (fast)" );
  gate.owned_neurons = { out.index };
  hook_css( net, gate, css, out, -( 2 * k - 1 ), "CSS to AND (fast)" );
  for ( int i = 0; i < k; ++i )
  {
    wire_input( net, gate, "in" + std::to_string( i ), inputs[i], out, 2, 1, "Input to AND" );
  }
  gate.ports.outputs["out"] = out;
  return gate;
}

gate_handle build_and( network& net, and_kind kind, gate_handle const* css, std::span<tap const> inputs,
                       std::string const& label )
{
  if ( kind == and_kind::classic )
  {
    return build_and_classic( net, inputs, label );
  }
  if ( css == nullptr )
  {
    throw network_error( "fast AND requires a constant spike source" );
  }
  return build_and_fast( net, *css, inputs, label );
}

gate_handle build_sr_latch( network& net, tap set, tap reset, std::string const& label )
{
  gate_handle gate;
  gate.kind = gate_kind::sr_latch;
  gate.latency_ms = 1;

  auto q = net.add_neuron( {}, label, "SR Latch" );
  gate.owned_neurons = { q.index };
  gate.owned_synapses.push_back( net.connect( q, q, 1, 1, "Internal SR Latch" ) );
  wire_input( net, gate, "set", set, q, 1, 1, "AND to SR Latch (set)" );
  wire_input( net, gate, "reset", reset, q, -2, 1, "AND to SR Latch (reset)" );
  gate.ports.outputs["q"] = q;
  return gate;
}

} // namespace gates
} // namespace spikemem
