#pragma once

#include "wiretap/cli/config.hpp"
#include "wiretap/cli/result_table.hpp"

namespace wiretap::cli {

/// Runs the bound and invariance checks; one row per check with columns
/// check_id, anchor, observed, bound, pass. Optional config field
/// "inject_eve" replaces the states of the whiteness check with a raw matrix.
ResultTable verify_suite(const RunConfig& cfg, bool& all_pass);

}  // namespace wiretap::cli
