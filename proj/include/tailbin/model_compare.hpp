#pragma once

#include "tailbin/binned_data.hpp"
#include "tailbin/estimation.hpp"

namespace tailbin {

enum class VuongWinner { a, b, undecided };

const char* to_string(VuongWinner w);

// Non-nested comparison via the normalized log-likelihood ratio.
// r = lnL_A - lnL_B, sigma2 the count-weighted per-observation variance of
// the bin log-probability gaps, r_n = r / sqrt(2 n sigma2), and
// p = 1 - erf(|r_n|). A wins when r_n >= T with T = erf_inv(1 - alpha).
// When sigma2 < 1e-14 the distributions are indistinguishable on these bins:
// degenerate is set and no decision is made.
struct VuongReport {
    Family family_a{};
    Estimator estimator_a{};
    Family family_b{};
    Estimator estimator_b{};
    double r = 0.0;
    double r_n = 0.0;
    double sigma2 = 0.0;
    double p_value = 1.0;
    double alpha = 0.1;
    VuongWinner winner = VuongWinner::undecided;
    bool degenerate = false;
};

VuongReport vuong_test(const FitResult& fit_a, const FitResult& fit_b,
                       const TruncatedSample& t, double alpha = 0.1);

// Nested test of k = 1: statistic 2|r| against chi-squared with one degree
// of freedom, where r is the Pareto-MLE vs Zipf log-likelihood gap.
struct LrtReport {
    double r_abs = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
};

LrtReport zipf_lrt(const TruncatedSample& t);

// Upper tail of chi-squared(1): erfc(sqrt(statistic/2)).
double chi2_1_upper_tail(double statistic);

} // namespace tailbin
