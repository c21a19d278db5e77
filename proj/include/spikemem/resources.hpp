#pragma once

#include "spikemem/blocks.hpp"
#include "spikemem/resource_report.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace spikemem::resources
{

class unsupported_formula : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class parameter_form : std::uint8_t
{
  by_inputs,  ///< n
  by_outputs  ///< m, or r for the memory
};

struct formula_query
{
  blocks::block_kind kind = blocks::block_kind::decoder;
  and_kind and_type = and_kind::fast;
  parameter_form form = parameter_form::by_inputs;
  long n = 0;  ///< inputs (encoder: number of one-hot inputs)
  long m = 0;  ///< outputs (decoder/mux/demux: 2^n; encoder: log2 of inputs)
  long r = 0;  ///< memory registers
  long c = 0;  ///< memory bits per register
};

/// Closed-form totals for the query. `by_category` carries the itemized
/// breakdown whenever the parameters describe a fully occupied block.
resource_report formula_resources( formula_query const& query );

/// Sum over i = 2..inputs of popcount(i - 1).
long encoder_synapse_sum( long inputs );

/// Input-to-output delay of each block (the encoder ignores `kind`).
int expected_latency( blocks::block_kind block, and_kind kind );

struct reconcile_result
{
  bool pass = false;
  resource_report measured;
  resource_report expected;
  /// Category names whose counts differ, in category order.
  std::vector<std::string> mismatched_categories;

  std::string summary() const;
};

/// Compares a built block's measured resources with the closed forms.
/// Throws std::invalid_argument when the query describes a different block.
reconcile_result reconcile( blocks::block_handle const& handle, formula_query const& query );

/// Query that matches how `handle` was built, in the given form.
formula_query query_for( blocks::block_handle const& handle, parameter_form form = parameter_form::by_inputs );

} // namespace spikemem::resources
