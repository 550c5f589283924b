#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tailbin/binned_data.hpp"
#include "tailbin/distributions.hpp"

namespace tailbin {

enum class Family { pareto, zipf, lognormal };
enum class Estimator { ols, mle, fixed };

const char* to_string(Family f);
const char* to_string(Estimator e);
Family family_from_string(std::string_view s);
Estimator estimator_from_string(std::string_view s);

struct FitResult {
    Family family{};
    Estimator estimator{};
    DistParams params;
    double loglik = 0.0;
    double r2_centered = 0.0;
    std::int64_t s_min = 0;
    std::int64_t n = 0;
    std::vector<std::string> notes; // non-fatal diagnostics (dropped boundaries, fallbacks)
};

// Binned log-likelihood sum h_i * ln p_i over bins j..m; h_i = 0 terms
// contribute nothing. Throws if some p_i == 0 with h_i > 0.
double log_likelihood(const DistParams& dist, const TruncatedSample& t);

// Intercept-constrained log-log regression of empirical survival on the
// boundaries: k = sum(x*y)/sum(x*x) with x = ln(s_min/b_i), y = ln Phat(S>=b_i).
// The fitted survival is exactly 1 at s_min by construction. Boundaries past
// the last positive empirical survival are dropped with a note.
FitResult fit_pareto_ols(const TruncatedSample& t);

// Maximum likelihood exponent via the likelihood's stationarity condition,
// solved by bracketed root search on k in [0.01, 50].
FitResult fit_pareto_mle(const TruncatedSample& t);

// Pareto with k fixed at 1; no estimation.
FitResult fit_zipf(const TruncatedSample& t);

// Binned maximum likelihood for the shifted lognormal: damped Newton on the
// two stationarity conditions with a numerically differenced Jacobian,
// moment-based start, coarse-grid fallback, and a 50x50 local-grid optimality
// check on the solution. Requires at least four bins.
FitResult fit_lognormal_mle(const TruncatedSample& t);

FitResult fit(Family family, Estimator estimator, const TruncatedSample& t);

// Centered R^2 over boundary points: y_i = ln Phat(S>=b_i) against
// yhat_i = ln P(S>=b_i | fit), 1 - SS_res/SS_tot. Requires >= 2 distinct y.
double r_squared_centered(const DistParams& params, const TruncatedSample& t);
double r_squared_centered(const FitResult& fit, const TruncatedSample& t);

} // namespace tailbin
