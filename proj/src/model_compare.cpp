#include "tailbin/model_compare.hpp"

#include <cmath>
#include <stdexcept>

#include "tailbin/numerics.hpp"

namespace tailbin {

const char* to_string(VuongWinner w) {
    switch (w) {
        case VuongWinner::a: return "a";
        case VuongWinner::b: return "b";
        case VuongWinner::undecided: return "undecided";
    }
    return "?";
}

VuongReport vuong_test(const FitResult& fit_a, const FitResult& fit_b,
                       const TruncatedSample& t, double alpha) {
    if (fit_a.s_min != t.s_min() || fit_b.s_min != t.s_min())
        throw std::invalid_argument("vuong_test: fits and sample must share s_min");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("vuong_test: alpha must be in (0, 1)");

    const auto pa = bin_probs(fit_a.params, t);
    const auto pb = bin_probs(fit_b.params, t);
    const auto counts = t.counts();
    const double n = static_cast<double>(t.total());

    VuongReport rep;
    rep.family_a = fit_a.family;
    rep.estimator_a = fit_a.estimator;
    rep.family_b = fit_b.family;
    rep.estimator_b = fit_b.estimator;
    rep.alpha = alpha;

    double r = 0.0;
    std::vector<double> gap(pa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        gap[i] = std::log(pa[i]) - std::log(pb[i]);
        r += static_cast<double>(counts[i]) * gap[i];
    }
    const double mean_gap = r / n;
    double sigma2 = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i)
        sigma2 += static_cast<double>(counts[i]) * (gap[i] - mean_gap) * (gap[i] - mean_gap);
    sigma2 /= n;

    rep.r = r;
    rep.sigma2 = sigma2;
    if (sigma2 < 1e-14) {
        // Indistinguishable on these bins; no decision.
        rep.degenerate = true;
        rep.r_n = 0.0;
        rep.p_value = 1.0;
        rep.winner = VuongWinner::undecided;
        return rep;
    }
    rep.r_n = r / std::sqrt(2.0 * n * sigma2);
    rep.p_value = std::erfc(std::fabs(rep.r_n));
    const double threshold = erf_inv(1.0 - alpha);
    if (rep.r_n >= threshold)
        rep.winner = VuongWinner::a;
    else if (rep.r_n <= -threshold)
        rep.winner = VuongWinner::b;
    else
        rep.winner = VuongWinner::undecided;
    return rep;
}

double chi2_1_upper_tail(double statistic) {
    if (statistic < 0.0) throw std::domain_error("chi2_1_upper_tail: negative statistic");
    return std::erfc(std::sqrt(statistic / 2.0));
}

LrtReport zipf_lrt(const TruncatedSample& t) {
    const FitResult pareto = fit_pareto_mle(t);
    const FitResult zipf = fit_zipf(t);
    LrtReport rep;
    rep.r_abs = std::fabs(pareto.loglik - zipf.loglik);
    rep.statistic = 2.0 * rep.r_abs;
    rep.p_value = chi2_1_upper_tail(rep.statistic);
    return rep;
}

} // namespace tailbin
