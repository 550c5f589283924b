#include "tailbin/fixtures.hpp"

#include <array>
#include <stdexcept>

namespace tailbin {

namespace {

// CEMPRE size bins: 0-4, 5-9, 10-19, 20-29, 30-49, 50-99, 100-249, 250-499, 500+.
constexpr std::array<std::int64_t, 9> kBoundaries = {0, 5, 10, 20, 30, 50, 100, 250, 500};

struct FixtureRow {
    IndustryGroup group;
    FixtureYear year;
    std::array<std::int64_t, 9> counts;
};

constexpr FixtureRow kTable[] = {
    {IndustryGroup::all, FixtureYear::y1996,
     {2616788, 327372, 141337, 40693, 31260, 23133, 15244, 5713, 5181}},
    {IndustryGroup::all, FixtureYear::y2001,
     {3903486, 432626, 193133, 55032, 39498, 27102, 16732, 6283, 5933}},
    {IndustryGroup::all, FixtureYear::y2006_old,
     {4730580, 542426, 265581, 69486, 50276, 33294, 19683, 7807, 7793}},
    {IndustryGroup::all, FixtureYear::y2006_new,
     {3324519, 531612, 261271, 69433, 50222, 33269, 19664, 7801, 7787}},
    {IndustryGroup::all, FixtureYear::y2013,
     {3985367, 755609, 379902, 102152, 73368, 47651, 27132, 10429, 10624}},
    {IndustryGroup::all, FixtureYear::y2020,
     {4090186, 739242, 358736, 93372, 65053, 43294, 24341, 9739, 10128}},
    {IndustryGroup::agriculture, FixtureYear::y1996,
     {16419, 3436, 1909, 735, 583, 447, 247, 103, 88}},
    {IndustryGroup::agriculture, FixtureYear::y2001,
     {23666, 3737, 2160, 814, 717, 538, 310, 132, 124}},
    {IndustryGroup::agriculture, FixtureYear::y2006_old,
     {38961, 4681, 2948, 980, 778, 585, 404, 121, 127}},
    {IndustryGroup::agriculture, FixtureYear::y2006_new,
     {21850, 4249, 2740, 977, 760, 599, 402, 125, 127}},
    {IndustryGroup::agriculture, FixtureYear::y2013,
     {93237, 5870, 3686, 1105, 863, 637, 398, 157, 127}},
    {IndustryGroup::agriculture, FixtureYear::y2020,
     {89402, 6638, 3657, 1136, 811, 681, 407, 160, 130}},
    {IndustryGroup::industry, FixtureYear::y1996,
     {315907, 61262, 36803, 13656, 11487, 9045, 5759, 2089, 1726}},
    {IndustryGroup::industry, FixtureYear::y2001,
     {413192, 73224, 48727, 18474, 14795, 10906, 6160, 1942, 1622}},
    {IndustryGroup::industry, FixtureYear::y2006_old,
     {474964, 83092, 59429, 21407, 17571, 13200, 7308, 2438, 2034}},
    {IndustryGroup::industry, FixtureYear::y2006_new,
     {314128, 82158, 59166, 21664, 17588, 13231, 7295, 2423, 2038}},
    {IndustryGroup::industry, FixtureYear::y2013,
     {433166, 118577, 79931, 29726, 23142, 17366, 9836, 3228, 2902}},
    {IndustryGroup::industry, FixtureYear::y2020,
     {472907, 107997, 69686, 24498, 17941, 13127, 7399, 2596, 2283}},
    {IndustryGroup::services, FixtureYear::y1996,
     {2284462, 262674, 102625, 26302, 19190, 13641, 9238, 3521, 3367}},
    {IndustryGroup::services, FixtureYear::y2001,
     {3466628, 355665, 142246, 35744, 23986, 15658, 10262, 4209, 4187}},
    {IndustryGroup::services, FixtureYear::y2006_old,
     {4216655, 454653, 203204, 47099, 31927, 19509, 11971, 5248, 5632}},
    {IndustryGroup::services, FixtureYear::y2006_new,
     {2988541, 445205, 199365, 46792, 31874, 19439, 11967, 5253, 5622}},
    {IndustryGroup::services, FixtureYear::y2013,
     {3458964, 631162, 296285, 71321, 49363, 29648, 16898, 7044, 7595}},
    {IndustryGroup::services, FixtureYear::y2020,
     {3527877, 624607, 285393, 67738, 46301, 29486, 16535, 6983, 7715}},
};

} // namespace

const char* to_string(IndustryGroup g) {
    switch (g) {
        case IndustryGroup::all: return "all";
        case IndustryGroup::agriculture: return "agriculture";
        case IndustryGroup::industry: return "industry";
        case IndustryGroup::services: return "services";
    }
    return "?";
}

const char* to_string(FixtureYear y) {
    switch (y) {
        case FixtureYear::y1996: return "1996";
        case FixtureYear::y2001: return "2001";
        case FixtureYear::y2006_old: return "2006old";
        case FixtureYear::y2006_new: return "2006new";
        case FixtureYear::y2013: return "2013";
        case FixtureYear::y2020: return "2020";
    }
    return "?";
}

BinnedSample fixture(IndustryGroup group, FixtureYear year) {
    for (const auto& row : kTable) {
        if (row.group == group && row.year == year) {
            return BinnedSample(
                BinScheme(std::vector<std::int64_t>(kBoundaries.begin(), kBoundaries.end())),
                std::vector<std::int64_t>(row.counts.begin(), row.counts.end()),
                std::string(to_string(group)) + ":" + to_string(year));
        }
    }
    throw std::invalid_argument("fixture: unknown selector");
}

BinnedSample fixture(std::string_view selector) {
    const auto colon = selector.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("fixture: selector must be '<group>:<year>', got '" +
                                    std::string(selector) + "'");
    const auto group_s = selector.substr(0, colon);
    const auto year_s = selector.substr(colon + 1);

    IndustryGroup group;
    if (group_s == "all") group = IndustryGroup::all;
    else if (group_s == "agriculture") group = IndustryGroup::agriculture;
    else if (group_s == "industry") group = IndustryGroup::industry;
    else if (group_s == "services") group = IndustryGroup::services;
    else throw std::invalid_argument("fixture: unknown industry group '" + std::string(group_s) + "'");

    FixtureYear year;
    if (year_s == "1996") year = FixtureYear::y1996;
    else if (year_s == "2001") year = FixtureYear::y2001;
    else if (year_s == "2006old") year = FixtureYear::y2006_old;
    else if (year_s == "2006new") year = FixtureYear::y2006_new;
    else if (year_s == "2013") year = FixtureYear::y2013;
    else if (year_s == "2020") year = FixtureYear::y2020;
    else throw std::invalid_argument("fixture: unknown year '" + std::string(year_s) + "'");

    return fixture(group, year);
}

std::vector<std::string> fixture_selectors() {
    std::vector<std::string> out;
    out.reserve(std::size(kTable));
    for (const auto& row : kTable)
        out.push_back(std::string(to_string(row.group)) + ":" + to_string(row.year));
    return out;
}

} // namespace tailbin
