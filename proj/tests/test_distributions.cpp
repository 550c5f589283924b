#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "tailbin/distributions.hpp"
#include "tailbin/estimation.hpp"
#include "tailbin/fixtures.hpp"

using namespace tailbin;

TEST_CASE("pareto survival") {
    const ParetoParams zipf{1.0, 20};
    CHECK(survival(zipf, 20.0) == 1.0);
    CHECK(survival(zipf, 40.0) == doctest::Approx(0.5).epsilon(1e-15));

    const ParetoParams p{0.9727, 20};
    // exp(k ln(20/500)), frozen from the reference survival
    const double expected = static_cast<double>(oracle::pareto_survival_ref(0.9727L, 20.0L, 500.0L));
    CHECK(expected == doctest::Approx(0.0437).epsilon(2e-3));
    CHECK(survival(p, 500.0) == doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(survival(p, 19.0), std::domain_error);
    CHECK_THROWS_AS(survival(ParetoParams{-1.0, 20}, 25.0), std::invalid_argument);
}

TEST_CASE("pareto survival is strictly decreasing past s_min") {
    const ParetoParams p{0.9, 5};
    double prev = survival(p, 5.0);
    for (std::int64_t s = 6; s <= 10000; s += 7) {
        const double cur = survival(p, static_cast<double>(s));
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("zipf scaling: survival(c*s) * c == survival(s)") {
    const ParetoParams zipf{1.0, 20};
    for (const double s : {20.0, 35.0, 80.0, 411.0}) {
        for (const double c : {2.0, 3.0, 7.5}) {
            CHECK(survival(zipf, c * s) * c == doctest::Approx(survival(zipf, s)).epsilon(1e-14));
        }
    }
}

TEST_CASE("lognormal survival") {
    CHECK(survival(LognormalParams{0.0, 1.0, 20}, 21.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(survival(LognormalParams{3.0, 1.2, 20}, 20.0) == 1.0); // convention at s_min

    // (1 - erf((ln 100 - 3)/(1.2 sqrt 2)))/2, via the reference erf
    const double expected =
        static_cast<double>(oracle::lognormal_survival_ref(3.0L, 1.2L, 20.0L, 120.0L));
    CHECK(expected == doctest::Approx(0.0905066).epsilon(1e-5));
    CHECK(survival(LognormalParams{3.0, 1.2, 20}, 120.0) ==
          doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(survival(LognormalParams{3.0, 1.2, 20}, 19.0), std::domain_error);
    CHECK_THROWS_AS(survival(LognormalParams{3.0, 0.0, 20}, 25.0), std::invalid_argument);
}

TEST_CASE("lognormal survival is nonincreasing on an integer grid") {
    const LognormalParams p{3.0, 1.5, 5};
    double prev = survival(p, 5.0);
    for (std::int64_t s = 6; s <= 10000; s += 11) {
        const double cur = survival(p, static_cast<double>(s));
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("bin_probs zipf two bins") {
    const BinScheme scheme(std::vector<std::int64_t>{20, 40});
    const auto probs = bin_probs(DistParams{ParetoParams{1.0, 20}}, scheme, 0);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bin_probs reproduces the published ML probability columns") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);

    // Pareto at the published-scale exponent.
    const auto pareto = bin_probs(DistParams{ParetoParams{0.9727, 20}}, t);
    const double pareto_pub[] = {0.326, 0.264, 0.201, 0.123, 0.042, 0.044};
    REQUIRE(pareto.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::fabs(pareto[i] - pareto_pub[i]) < 1e-3);

    // Lognormal at its ML estimate.
    const FitResult ln = fit_lognormal_mle(t);
    const auto lognormal = bin_probs(ln.params, t);
    const double lognormal_pub[] = {0.341, 0.242, 0.194, 0.136, 0.049, 0.038};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::fabs(lognormal[i] - lognormal_pub[i]) < 1e-3);
}

TEST_CASE("bin_probs sums to one and stays positive") {
    const BinnedSample all96 = fixture("all:1996");
    for (const std::int64_t s_min : {5, 10, 20, 30, 50}) {
        const TruncatedSample t = truncate(all96, s_min);
        for (const DistParams dist :
             {DistParams{ParetoParams{0.8, s_min}}, DistParams{ParetoParams{1.0, s_min}},
              DistParams{ParetoParams{2.5, s_min}}, DistParams{LognormalParams{3.0, 1.5, s_min}},
              DistParams{LognormalParams{1.0, 0.4, s_min}}}) {
            const auto probs = bin_probs(dist, t);
            double sum = 0.0;
            for (const double p : probs) {
                CHECK(p > 0.0);
                sum += p;
            }
            CHECK(std::fabs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("bin_probs boundary mismatch is rejected") {
    const TruncatedSample t = truncate(fixture("all:1996"), 20);
    CHECK_THROWS_AS(bin_probs(DistParams{ParetoParams{1.0, 30}}, t), std::invalid_argument);
}

TEST_CASE("discrete pmf") {
    CHECK(discrete_pmf(DistParams{ParetoParams{1.0, 1}}, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(discrete_pmf(DistParams{ParetoParams{2.0, 10}}, 10) ==
          doctest::Approx(1.0 - (10.0 / 11.0) * (10.0 / 11.0)).epsilon(1e-14));
    CHECK_THROWS_AS(discrete_pmf(DistParams{ParetoParams{2.0, 10}}, 9), std::domain_error);
    CHECK(discrete_pmf(DistParams{LognormalParams{3.0, 1.5, 5}}, 5) > 0.0);
}

TEST_CASE("discrete pmf telescopes to one") {
    const std::int64_t s_max = 10000;
    for (const DistParams dist :
         {DistParams{ParetoParams{1.1, 5}}, DistParams{ParetoParams{0.8, 20}},
          DistParams{LognormalParams{3.0, 1.5, 5}}}) {
        double sum = 0.0;
        for (std::int64_t s = dist_s_min(dist); s <= s_max; ++s) sum += discrete_pmf(dist, s);
        sum += survival(dist, static_cast<double>(s_max) + 1.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-11));
    }
}
