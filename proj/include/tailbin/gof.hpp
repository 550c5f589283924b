#pragma once

#include <cstdint>

#include "tailbin/binned_data.hpp"
#include "tailbin/estimation.hpp"

namespace tailbin {

struct GofReport {
    Family family{};
    Estimator estimator{};
    double d_star = 0.0;  // observed KS distance
    double p_value = 0.0; // fraction of synthetic distances >= d_star
    int replicates = 0;   // as requested
    int excluded = 0;     // replicates dropped after refit failure
    std::uint64_t seed = 0;
};

// Max |Phat(S>=b_i) - P(S>=b_i | fit)| over the truncated boundaries.
double ks_distance(const FitResult& fit, const TruncatedSample& t);

// Parametric-bootstrap goodness of fit: fit the real data, then repeatedly
// draw multinomial synthetic counts from the fitted bin probabilities, refit
// with the same estimator (Zipf keeps k = 1), and compare KS distances.
// Replicate r uses RngStream(seed, r). Aborts if more than 1% of replicates
// fail to refit.
GofReport gof_pvalue(Family family, Estimator estimator, const TruncatedSample& t,
                     int replicates, std::uint64_t seed);

} // namespace tailbin
