#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tailbin {

// Ordered bin lower boundaries b_1 < b_2 < ... < b_m, b_1 >= 0.
// Bin i is [b_i, b_{i+1}) for i < m; the m-th bin is open-ended [b_m, inf).
class BinScheme {
public:
    explicit BinScheme(std::vector<std::int64_t> boundaries);

    std::size_t bin_count() const { return boundaries_.size(); }
    std::span<const std::int64_t> boundaries() const { return boundaries_; }
    std::int64_t boundary(std::size_t i) const { return boundaries_[i]; }

    // Index of an exact boundary value; throws std::invalid_argument if absent.
    std::size_t index_of(std::int64_t boundary) const;

    bool operator==(const BinScheme&) const = default;

private:
    std::vector<std::int64_t> boundaries_;
};

// Nonnegative counts per bin over a BinScheme, total > 0.
// `label` is free-form provenance (e.g. "all:1996" or a CSV path).
class BinnedSample {
public:
    BinnedSample(BinScheme scheme, std::vector<std::int64_t> counts, std::string label = {});

    const BinScheme& scheme() const { return scheme_; }
    std::span<const std::int64_t> counts() const { return counts_; }
    const std::string& label() const { return label_; }
    std::int64_t total() const { return total_; }

private:
    BinScheme scheme_;
    std::vector<std::int64_t> counts_;
    std::string label_;
    std::int64_t total_ = 0;
};

// A BinnedSample restricted to bins at or above a lower bound s_min = b_j.
// Keeps the parent; j is 0-based and leaves at least two bins.
class TruncatedSample {
public:
    TruncatedSample(BinnedSample parent, std::int64_t s_min);

    const BinnedSample& parent() const { return parent_; }
    std::int64_t s_min() const { return s_min_; }
    std::size_t first_bin() const { return j_; }
    std::int64_t total() const { return n_; }

    std::size_t bin_count() const { return parent_.scheme().bin_count() - j_; }
    std::span<const std::int64_t> boundaries() const;
    std::span<const std::int64_t> counts() const;

private:
    BinnedSample parent_;
    std::size_t j_ = 0;
    std::int64_t s_min_ = 0;
    std::int64_t n_ = 0;
};

// CSV format: header "lower,count", one integer pair per line, rows sorted
// ascending by lower boundary. The final row is the open-ended bin.
BinnedSample parse_binned_csv(std::istream& in, std::string label = {});
BinnedSample parse_binned_csv(const std::string& text, std::string label = {});
std::string to_csv(const BinnedSample& sample);

TruncatedSample truncate(const BinnedSample& sample, std::int64_t s_min);

// Pairs (b_i, P(S >= b_i)) for i = j..m; the first entry is exactly 1.
std::vector<std::pair<std::int64_t, double>> empirical_survival(const TruncatedSample& t);

} // namespace tailbin
