#pragma once

#include "spikemem/blocks.hpp"
#include "spikemem/network.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikemem::harness
{

class netlist_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr char const* netlist_format = "spikemem-netlist";
inline constexpr int netlist_version = 1;

/// Port annotation for one block in a netlist.
struct block_annotation
{
  std::string kind;
  std::string and_type;
  int latency_ms = 0;
  std::vector<blocks::named_node> inputs;
  std::vector<blocks::named_node> outputs;
};

struct netlist_document
{
  network net;
  std::vector<block_annotation> blocks;
};

block_annotation annotate( blocks::block_handle const& handle );

/// Versioned JSON text. Neurons, sources and synapses are listed in id order
/// so import(export(net)) rebuilds identical ids.
std::string export_netlist( netlist_document const& doc );
netlist_document import_netlist( std::string const& text );

void write_netlist( std::filesystem::path const& path, netlist_document const& doc );
netlist_document read_netlist( std::filesystem::path const& path );

} // namespace spikemem::harness
