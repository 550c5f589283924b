#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "tailbin/estimation.hpp"
#include "tailbin/fixtures.hpp"
#include "tailbin/numerics.hpp"

using namespace tailbin;

namespace {

// Synthetic sample whose empirical survival is exactly (s_min/b)^k at every
// boundary: counts proportional to the exact bin probabilities.
BinnedSample exact_pareto_sample(double k, const std::vector<std::int64_t>& bounds,
                                 std::int64_t scale) {
    std::vector<std::int64_t> counts;
    double prev = 1.0;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
        const double s = std::pow(static_cast<double>(bounds.front()) /
                                  static_cast<double>(bounds[i]), k);
        counts.push_back(std::llround(static_cast<double>(scale) * (prev - s)));
        prev = s;
    }
    counts.push_back(std::llround(static_cast<double>(scale) * prev));
    return BinnedSample(BinScheme(bounds), counts, "exact-pareto");
}

} // namespace

TEST_CASE("log_likelihood basics") {
    const BinnedSample two(BinScheme({20, 40}), {1, 1}, "two");
    const TruncatedSample t = truncate(two, 20);
    CHECK(log_likelihood(DistParams{ParetoParams{1.0, 20}}, t) ==
          doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-14));

    // Zero counts contribute nothing.
    const BinnedSample holes(BinScheme({20, 40, 80}), {1, 0, 1}, "holes");
    const TruncatedSample th = truncate(holes, 20);
    CHECK(log_likelihood(DistParams{ParetoParams{1.0, 20}}, th) ==
          doctest::Approx(std::log(0.5) + std::log(0.25)).epsilon(1e-14));

    CHECK_THROWS_AS(log_likelihood(DistParams{ParetoParams{1.0, 30}}, t), std::invalid_argument);
}

TEST_CASE("log_likelihood reports the offending bin when a probability underflows") {
    // A near-degenerate sigma drives every survival past the first boundary
    // to zero, so occupied upper bins have zero probability.
    const BinnedSample s(BinScheme({20, 30, 50, 100}), {5, 3, 2, 1}, "deg");
    const TruncatedSample t = truncate(s, 20);
    CHECK_THROWS_WITH_AS(log_likelihood(DistParams{LognormalParams{0.0, 1e-200, 20}}, t),
                         doctest::Contains("bin"), std::runtime_error);
}

TEST_CASE("log_likelihood agrees with the direct-summation reference") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    for (const double k : {0.9727, 0.8, 1.0, 1.3}) {
        const double expected =
            static_cast<double>(oracle::pareto_loglik_ref(k, t.boundaries(), t.counts()));
        CHECK(log_likelihood(DistParams{ParetoParams{k, 20}}, t) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("MLE loglik dominates the zipf loglik on the same family") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    CHECK(fit_zipf(t).loglik < fit_pareto_mle(t).loglik);
}

TEST_CASE("fit_pareto_ols recovers an exact power law") {
    const BinnedSample s = exact_pareto_sample(2.0, {20, 30, 50, 100, 250, 500}, 100000000);
    const FitResult fit = fit_pareto_ols(truncate(s, 20));
    CHECK(std::get<ParetoParams>(fit.params).k == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.r2_centered == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_pareto_ols exactness to machine precision") {
    // Constructed counts give y = k x exactly at double precision only when
    // survival ratios are dyadic: boundaries double, k integer.
    const BinnedSample s(BinScheme({16, 32, 64, 128}), {8, 4, 2, 2}, "dyadic");
    const FitResult fit = fit_pareto_ols(truncate(s, 16));
    CHECK(std::get<ParetoParams>(fit.params).k == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fit_pareto_ols on all:1996 at s_min 20") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    const FitResult fit = fit_pareto_ols(t);
    const double expected = oracle::ols_slope_ref(t.boundaries(), t.counts());
    CHECK(std::get<ParetoParams>(fit.params).k == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.968).epsilon(1e-3));
    // Fitted survival is exactly one at the lower bound.
    CHECK(survival(fit.params, static_cast<double>(t.s_min())) == 1.0);
}

TEST_CASE("fit_pareto_ols drops zero-survival boundaries with a note") {
    const BinnedSample s(BinScheme({20, 40, 80, 160}), {6, 3, 3, 0}, "empty-top");
    const FitResult fit = fit_pareto_ols(truncate(s, 20));
    CHECK(!fit.notes.empty());
    CHECK(std::get<ParetoParams>(fit.params).k > 0.0);
}

TEST_CASE("fit_pareto_ols error paths") {
    const BinnedSample one_pt(BinScheme({20, 40}), {5, 0}, "one-point");
    CHECK_THROWS_AS(fit_pareto_ols(truncate(one_pt, 20)), std::runtime_error);

    const BinnedSample whole = fixture("all:1996");
    CHECK_THROWS_AS(fit_pareto_ols(truncate(whole, 0)), std::domain_error);
}

TEST_CASE("fit_pareto_mle matches the grid argmax of the log-likelihood") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    const FitResult fit = fit_pareto_mle(t);
    const double k = std::get<ParetoParams>(fit.params).k;
    CHECK(k == doctest::Approx(0.972).epsilon(1.5e-3));

    const double k_grid = oracle::pareto_grid_argmax(t.boundaries(), t.counts(), 0.5, 1.5, 1e-4);
    CHECK(std::fabs(k - k_grid) <= 1e-4);

    // Published probability column, within a tenth of a percentage point.
    const auto probs = bin_probs(fit.params, t);
    const double published[] = {0.326, 0.264, 0.201, 0.123, 0.042, 0.044};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::fabs(probs[i] - published[i]) < 1e-3);
}

TEST_CASE("pareto MLE dominance over a parameter grid") {
    const TruncatedSample t = truncate(fixture("industry:2013"), 10);
    const FitResult fit = fit_pareto_mle(t);
    for (int i = 0; i < 200; ++i) {
        const double k = 0.2 + i * (5.0 - 0.2) / 199.0;
        CHECK(fit.loglik >= log_likelihood(DistParams{ParetoParams{k, 10}}, t) - 1e-9);
    }
}

TEST_CASE("fit_pareto_mle degenerate data") {
    const BinnedSample first_only(BinScheme({20, 40}), {9, 0}, "first-only");
    CHECK_THROWS_AS(fit_pareto_mle(truncate(first_only, 20)), std::runtime_error);

    // All mass in the last bin pushes the exponent to zero: no stationary
    // point inside the bracket.
    const BinnedSample last_only(BinScheme({20, 40, 80}), {0, 0, 9}, "last-only");
    CHECK_THROWS_AS(fit_pareto_mle(truncate(last_only, 20)), std::runtime_error);
}

TEST_CASE("fit_pareto_mle on synthetic multinomial data near k=1.1") {
    const std::vector<std::int64_t> bounds = {5, 10, 20, 30, 50, 100, 250, 500};
    const BinScheme scheme(bounds);
    const DistParams truth{ParetoParams{1.1, 5}};
    const auto probs = bin_probs(truth, scheme, 0);
    RngStream rng(2024, 0);
    const auto counts = multinomial_sample(rng, 100000, probs);
    const FitResult fit = fit_pareto_mle(truncate(BinnedSample(scheme, counts, "synthetic"), 5));
    const double k = std::get<ParetoParams>(fit.params).k;
    CHECK(k >= 1.08);
    CHECK(k <= 1.12);
}

TEST_CASE("k estimates approach one as s_min grows on all:1996") {
    const BinnedSample all96 = fixture("all:1996");
    for (const auto estimator : {Estimator::mle, Estimator::ols}) {
        const double k5 =
            std::get<ParetoParams>(fit(Family::pareto, estimator, truncate(all96, 5)).params).k;
        const double k50 =
            std::get<ParetoParams>(fit(Family::pareto, estimator, truncate(all96, 50)).params).k;
        CHECK(std::fabs(k50 - 1.0) < std::fabs(k5 - 1.0));
    }
}

TEST_CASE("fit_lognormal_mle reproduces the published columns") {
    {
        const TruncatedSample t = truncate(fixture("all:1996"), 20);
        const auto probs = bin_probs(fit_lognormal_mle(t).params, t);
        const double published[] = {0.341, 0.242, 0.194, 0.136, 0.049, 0.038};
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::fabs(probs[i] - published[i]) < 1e-3);
    }
    {
        const TruncatedSample t = truncate(fixture("services:2020"), 20);
        const auto probs = bin_probs(fit_lognormal_mle(t).params, t);
        const double published[] = {0.398, 0.232, 0.175, 0.118, 0.043, 0.034};
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::fabs(probs[i] - published[i]) < 1e-3);
    }
}

TEST_CASE("fit_lognormal_mle beats a local grid in reference log-likelihood") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    const FitResult fit = fit_lognormal_mle(t);
    const auto& p = std::get<LognormalParams>(fit.params);
    const long double at_solution =
        oracle::lognormal_loglik_ref(p.mu, p.sigma, t.boundaries(), t.counts(), t.s_min());
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double mu = p.mu - 0.2 + i * (0.4 / 49.0);
            const double sigma = p.sigma * (0.9 + j * (0.2 / 49.0));
            const long double ll =
                oracle::lognormal_loglik_ref(mu, sigma, t.boundaries(), t.counts(), t.s_min());
            CHECK(static_cast<double>(at_solution) >=
                  static_cast<double>(ll) - 1e-7 * (1.0 + std::fabs(static_cast<double>(at_solution))));
        }
    }
}

TEST_CASE("fit_lognormal_mle recovers synthetic parameters") {
    const std::vector<std::int64_t> bounds = {5, 10, 20, 30, 50, 100, 250, 500};
    const BinScheme scheme(bounds);
    const DistParams truth{LognormalParams{3.0, 1.5, 5}};
    const auto probs = bin_probs(truth, scheme, 0);
    RngStream rng(99, 0);
    const auto counts = multinomial_sample(rng, 100000, probs);
    const FitResult fit = fit_lognormal_mle(truncate(BinnedSample(scheme, counts, "synthetic"), 5));
    const auto& p = std::get<LognormalParams>(fit.params);
    CHECK(std::fabs(p.mu - 3.0) < 0.05);
    CHECK(std::fabs(p.sigma - 1.5) < 0.05);
}

TEST_CASE("fit_lognormal_mle preconditions") {
    const BinnedSample three(BinScheme({20, 40, 80}), {4, 2, 2}, "three-bins");
    CHECK_THROWS_AS(fit_lognormal_mle(truncate(three, 20)), std::invalid_argument);
    CHECK_THROWS_AS(fit(Family::lognormal, Estimator::ols, truncate(fixture("all:1996"), 20)),
                    std::invalid_argument);
}

TEST_CASE("count scaling leaves every estimate unchanged") {
    const BinnedSample base = fixture("agriculture:2001");
    std::vector<std::int64_t> scaled_counts(base.counts().begin(), base.counts().end());
    for (auto& c : scaled_counts) c *= 7;
    const BinnedSample scaled(base.scheme(), scaled_counts, "scaled");

    const TruncatedSample t1 = truncate(base, 10);
    const TruncatedSample t7 = truncate(scaled, 10);

    CHECK(std::get<ParetoParams>(fit_pareto_ols(t1).params).k ==
          doctest::Approx(std::get<ParetoParams>(fit_pareto_ols(t7).params).k).epsilon(1e-12));
    CHECK(std::get<ParetoParams>(fit_pareto_mle(t1).params).k ==
          doctest::Approx(std::get<ParetoParams>(fit_pareto_mle(t7).params).k).epsilon(1e-9));
    const auto ln1 = std::get<LognormalParams>(fit_lognormal_mle(t1).params);
    const auto ln7 = std::get<LognormalParams>(fit_lognormal_mle(t7).params);
    CHECK(ln1.mu == doctest::Approx(ln7.mu).epsilon(1e-6));
    CHECK(ln1.sigma == doctest::Approx(ln7.sigma).epsilon(1e-6));
}

TEST_CASE("fitted survival equals one at the lower bound for every family") {
    const TruncatedSample t = truncate(fixture("all:2013"), 20);
    for (const auto& [family, estimator] :
         {std::pair{Family::pareto, Estimator::mle}, {Family::pareto, Estimator::ols},
          {Family::zipf, Estimator::fixed}, {Family::lognormal, Estimator::mle}}) {
        const FitResult f = fit(family, estimator, t);
        CHECK(survival(f.params, 20.0) == 1.0);
    }
}

TEST_CASE("r_squared_centered") {
    // A perfect fit scores exactly 1.
    const BinnedSample s = exact_pareto_sample(1.5, {20, 40, 80, 160, 320}, 100000000);
    const TruncatedSample t = truncate(s, 20);
    CHECK(r_squared_centered(DistParams{ParetoParams{1.5, 20}}, t) ==
          doctest::Approx(1.0).epsilon(1e-7));

    // Definition check by hand: two points (0, 0) and (ln(1/2), y) with
    // y = ln(1/2). A fit predicting y/2 at the second point leaves
    // SS_res = y^2/4 against SS_tot = y^2/2, so R^2 = 1/2.
    const BinnedSample two(BinScheme({20, 40}), {1, 1}, "two");
    const TruncatedSample t2 = truncate(two, 20);
    const double y = std::log(0.5);
    const double k_half = -(y / 2.0) / std::log(2.0); // yhat(40) = y/2
    CHECK(r_squared_centered(DistParams{ParetoParams{k_half, 20}}, t2) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // Strong fit on the real data.
    const TruncatedSample tr = truncate(fixture("all:1996"), 20);
    CHECK(fit_pareto_mle(tr).r2_centered > 0.99);

    // Degenerate: all observed survival values equal.
    const BinnedSample flat(BinScheme({20, 40}), {0, 3}, "flat");
    CHECK_THROWS_AS(r_squared_centered(DistParams{ParetoParams{1.0, 20}}, truncate(flat, 20)),
                    std::domain_error);
}

TEST_CASE("string conversions") {
    CHECK(family_from_string("pareto") == Family::pareto);
    CHECK(family_from_string("zipf") == Family::zipf);
    CHECK(family_from_string("lognormal") == Family::lognormal);
    CHECK_THROWS_AS(family_from_string("cauchy"), std::invalid_argument);
    CHECK(estimator_from_string("mle") == Estimator::mle);
    CHECK(estimator_from_string("ols") == Estimator::ols);
    CHECK(estimator_from_string("fixed") == Estimator::fixed);
    CHECK_THROWS_AS(estimator_from_string("map"), std::invalid_argument);
}
