#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tailbin/sweep.hpp"

namespace tailbin {

constexpr const char* kToolName = "tailbin";
constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// {meta:{...}, records:[...]} with stable key order; no timestamps or other
// run-dependent fields, so equal configs give byte-equal reports.
nlohmann::ordered_json report_json(const RunConfig& config, const SweepResult& result,
                                   std::string_view command);

// Flat one-row-per-record form with a fixed column set.
std::string report_csv(const SweepResult& result);

} // namespace tailbin
