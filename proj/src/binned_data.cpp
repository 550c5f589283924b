#include "tailbin/binned_data.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tailbin {

BinScheme::BinScheme(std::vector<std::int64_t> boundaries)
    : boundaries_(std::move(boundaries)) {
    if (boundaries_.size() < 2)
        throw std::invalid_argument("BinScheme: need at least 2 boundaries");
    if (boundaries_.front() < 0)
        throw std::invalid_argument("BinScheme: boundaries must be nonnegative");
    for (std::size_t i = 1; i < boundaries_.size(); ++i) {
        if (boundaries_[i] <= boundaries_[i - 1])
            throw std::invalid_argument("BinScheme: boundaries must be strictly increasing");
    }
}

std::size_t BinScheme::index_of(std::int64_t boundary) const {
    const auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), boundary);
    if (it == boundaries_.end() || *it != boundary)
        throw std::invalid_argument("BinScheme: " + std::to_string(boundary) +
                                    " is not a bin boundary");
    return static_cast<std::size_t>(it - boundaries_.begin());
}

BinnedSample::BinnedSample(BinScheme scheme, std::vector<std::int64_t> counts, std::string label)
    : scheme_(std::move(scheme)), counts_(std::move(counts)), label_(std::move(label)) {
    if (counts_.size() != scheme_.bin_count())
        throw std::invalid_argument("BinnedSample: got " + std::to_string(counts_.size()) +
                                    " counts for " + std::to_string(scheme_.bin_count()) + " bins");
    for (const auto c : counts_) {
        if (c < 0) throw std::invalid_argument("BinnedSample: counts must be nonnegative");
    }
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
    if (total_ <= 0)
        throw std::invalid_argument("BinnedSample: total count must be positive");
}

TruncatedSample::TruncatedSample(BinnedSample parent, std::int64_t s_min)
    : parent_(std::move(parent)), s_min_(s_min) {
    j_ = parent_.scheme().index_of(s_min);
    const std::size_t m = parent_.scheme().bin_count();
    if (j_ + 2 > m)
        throw std::invalid_argument("truncate: fewer than 2 bins remain at s_min = " +
                                    std::to_string(s_min));
    const auto c = parent_.counts();
    n_ = std::accumulate(c.begin() + static_cast<std::ptrdiff_t>(j_), c.end(), std::int64_t{0});
    if (n_ <= 0)
        throw std::invalid_argument("truncate: no observations at or above s_min = " +
                                    std::to_string(s_min));
}

std::span<const std::int64_t> TruncatedSample::boundaries() const {
    return parent_.scheme().boundaries().subspan(j_);
}

std::span<const std::int64_t> TruncatedSample::counts() const {
    return parent_.counts().subspan(j_);
}

TruncatedSample truncate(const BinnedSample& sample, std::int64_t s_min) {
    return TruncatedSample(sample, s_min);
}

std::vector<std::pair<std::int64_t, double>> empirical_survival(const TruncatedSample& t) {
    const auto bounds = t.boundaries();
    const auto counts = t.counts();
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(bounds.size());
    std::int64_t tail = t.total();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        out.emplace_back(bounds[i], static_cast<double>(tail) / static_cast<double>(t.total()));
        tail -= counts[i];
    }
    return out;
}

namespace {

std::int64_t parse_int_field(std::string_view field, std::size_t line_no, const char* what) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": " + what +
                                    " is not an integer: '" + std::string(field) + "'");
    return value;
}

} // namespace

BinnedSample parse_binned_csv(std::istream& in, std::string label) {
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::vector<std::int64_t> lowers;
    std::vector<std::int64_t> counts;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "lower,count")
                throw std::invalid_argument("CSV line 1: expected header 'lower,count', got '" +
                                            line + "'");
            saw_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                        ": expected exactly two fields");
        lowers.push_back(parse_int_field(std::string_view(line).substr(0, comma), line_no, "lower"));
        counts.push_back(parse_int_field(std::string_view(line).substr(comma + 1), line_no, "count"));
    }
    if (!saw_header) throw std::invalid_argument("CSV: missing 'lower,count' header");
    if (lowers.size() < 2) throw std::invalid_argument("CSV: need at least 2 data rows");
    for (std::size_t i = 1; i < lowers.size(); ++i) {
        if (lowers[i] <= lowers[i - 1])
            throw std::invalid_argument("CSV: boundaries must be strictly increasing (row " +
                                        std::to_string(i + 2) + ")");
    }
    return BinnedSample(BinScheme(std::move(lowers)), std::move(counts), std::move(label));
}

BinnedSample parse_binned_csv(const std::string& text, std::string label) {
    std::istringstream in(text);
    return parse_binned_csv(in, std::move(label));
}

std::string to_csv(const BinnedSample& sample) {
    std::string out = "lower,count\n";
    const auto bounds = sample.scheme().boundaries();
    const auto counts = sample.counts();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        out += std::to_string(bounds[i]);
        out += ',';
        out += std::to_string(counts[i]);
        out += '\n';
    }
    return out;
}

} // namespace tailbin
