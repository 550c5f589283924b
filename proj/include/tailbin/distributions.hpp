#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tailbin/binned_data.hpp"

namespace tailbin {

// Survival P(S >= s) = (s_min/s)^k on s >= s_min > 0. k = 1 is the Zipf case.
struct ParetoParams {
    double k = 1.0;
    std::int64_t s_min = 1;
};

// S - s_min > 0 lognormal with log-scale parameters mu, sigma.
struct LognormalParams {
    double mu = 0.0;
    double sigma = 1.0;
    std::int64_t s_min = 1;
};

using DistParams = std::variant<ParetoParams, LognormalParams>;

double survival(const ParetoParams& p, double s);

// Convention: survival(s_min) == 1, so the first truncated bin gets
// 1 - P(S >= b_{j+1}) exactly.
double survival(const LognormalParams& p, double s);

double survival(const DistParams& dist, double s);

std::int64_t dist_s_min(const DistParams& dist);

// Probabilities for bins starting at tail_boundaries[0] == s_min:
// interior bins are survival differences, the last bin keeps survival(b_m).
// Telescopes to 1 up to rounding.
std::vector<double> bin_probs(const DistParams& dist, std::span<const std::int64_t> tail_boundaries);
std::vector<double> bin_probs(const DistParams& dist, const BinScheme& scheme, std::size_t first_bin);
std::vector<double> bin_probs(const DistParams& dist, const TruncatedSample& t);

// Discretized mass P(S = s) = P(S >= s) - P(S >= s+1) for integer s >= s_min.
double discrete_pmf(const DistParams& dist, std::int64_t s);

} // namespace tailbin
