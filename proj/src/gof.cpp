#include "tailbin/gof.hpp"

#include <cmath>
#include <stdexcept>

#include "tailbin/numerics.hpp"

namespace tailbin {

double ks_distance(const FitResult& fit, const TruncatedSample& t) {
    if (fit.s_min != t.s_min())
        throw std::invalid_argument("ks_distance: fit and sample s_min differ");
    const auto empirical = empirical_survival(t);
    double d = 0.0;
    for (const auto& [boundary, p_hat] : empirical) {
        const double p_model = survival(fit.params, static_cast<double>(boundary));
        d = std::max(d, std::fabs(p_hat - p_model));
    }
    return d;
}

namespace {

void check_gof_combo(Family family, Estimator estimator) {
    const bool ok = (family == Family::pareto &&
                     (estimator == Estimator::mle || estimator == Estimator::ols)) ||
                    (family == Family::zipf && estimator == Estimator::fixed) ||
                    (family == Family::lognormal && estimator == Estimator::mle);
    if (!ok)
        throw std::invalid_argument(std::string("gof_pvalue: unsupported combination ") +
                                    to_string(family) + ":" + to_string(estimator));
}

} // namespace

GofReport gof_pvalue(Family family, Estimator estimator, const TruncatedSample& t,
                     int replicates, std::uint64_t seed) {
    check_gof_combo(family, estimator);
    if (replicates < 1)
        throw std::invalid_argument("gof_pvalue: replicates must be >= 1");

    const FitResult real_fit = fit(family, estimator, t);
    const double d_star = ks_distance(real_fit, t);
    const auto probs = bin_probs(real_fit.params, t);

    const std::vector<std::int64_t> tail_bounds(t.boundaries().begin(), t.boundaries().end());
    const std::string synth_label = t.parent().label() + "/synthetic";

    int at_least = 0;
    int excluded = 0;
    for (int r = 0; r < replicates; ++r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        const auto counts = multinomial_sample(rng, t.total(), probs);
        const TruncatedSample synth =
            truncate(BinnedSample(BinScheme(tail_bounds), counts, synth_label), t.s_min());
        FitResult refit;
        try {
            // Zipf needs no estimation; everything else refits with the same
            // estimator and solver settings as the real fit.
            refit = (family == Family::zipf) ? fit_zipf(synth) : fit(family, estimator, synth);
        } catch (const std::exception&) {
            ++excluded;
            continue;
        }
        if (ks_distance(refit, synth) >= d_star) ++at_least;
    }
    if (excluded * 100 > replicates)
        throw std::runtime_error("gof_pvalue: " + std::to_string(excluded) + " of " +
                                 std::to_string(replicates) +
                                 " synthetic refits failed (> 1%)");

    GofReport report;
    report.family = family;
    report.estimator = estimator;
    report.d_star = d_star;
    report.p_value = static_cast<double>(at_least) / static_cast<double>(replicates - excluded);
    report.replicates = replicates;
    report.excluded = excluded;
    report.seed = seed;
    return report;
}

} // namespace tailbin
