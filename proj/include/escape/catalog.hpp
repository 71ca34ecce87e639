#pragma once

// The model catalog: built-in entries plus a line-oriented key/value file
// format ([name] sections) so suites can pin their own menus and expected
// verdicts.

#include "escape/growth.hpp"

#include <string>
#include <vector>

namespace escape {

using Catalog = std::vector<GrowthModel>;

// exp, quarter_exp, cosh, cosh_series, exp_z2, poly6, ex53, sqrt_mu,
// finalized and ready to evaluate.
Catalog builtin_catalog();

const GrowthModel& find_model(const Catalog& cat, const std::string& name);

std::string dump_catalog(const Catalog& cat);
Catalog parse_catalog(const std::string& text);

// Throws std::runtime_error when the file cannot be read.
Catalog load_catalog(const std::string& path);

} // namespace escape
