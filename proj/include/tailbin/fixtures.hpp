#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tailbin/binned_data.hpp"

namespace tailbin {

enum class IndustryGroup { all, agriculture, industry, services };

// 2006 appears twice: once per register methodology (pre/post break).
enum class FixtureYear { y1996, y2001, y2006_old, y2006_new, y2013, y2020 };

const char* to_string(IndustryGroup g);
const char* to_string(FixtureYear y);

// Built-in CEMPRE firm-count tables (employees per firm, nine bins).
BinnedSample fixture(IndustryGroup group, FixtureYear year);

// Selector form "<group>:<year>", e.g. "all:1996", "agriculture:2006new".
BinnedSample fixture(std::string_view selector);

// All 24 selectors in stable (group-major, year-minor) order.
std::vector<std::string> fixture_selectors();

} // namespace tailbin
