#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cournot/equilibrium.hpp"
#include "cournot/planner.hpp"

namespace cournot {

/// Ordered key=value pairs printed on one line. Values containing spaces,
/// quotes, '=' or backslashes are double-quoted with backslash escapes.
using Record = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

std::string format_record(const Record& rec);
/// Inverse of format_record. Throws input error on malformed text.
Record parse_record(std::string_view line);

const std::string* find_field(const Record& rec, std::string_view key);

Record to_record(const EquilibriumResult& r);
Record to_record(const EfficiencyReport& r);
Record to_record(const PlannerBenchmarks& b);
Record to_record(const ValidationReport& v);

}  // namespace cournot
