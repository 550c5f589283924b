#include "tailbin/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace tailbin {

namespace {

void check_params(const ParetoParams& p) {
    if (!(p.k > 0.0)) throw std::invalid_argument("ParetoParams: k must be positive");
    if (p.s_min <= 0) throw std::invalid_argument("ParetoParams: s_min must be positive");
}

void check_params(const LognormalParams& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("LognormalParams: sigma must be positive");
    if (p.s_min < 0) throw std::invalid_argument("LognormalParams: s_min must be nonnegative");
}

} // namespace

double survival(const ParetoParams& p, double s) {
    check_params(p);
    if (s < static_cast<double>(p.s_min))
        throw std::domain_error("pareto survival: s below s_min");
    if (s == static_cast<double>(p.s_min)) return 1.0;
    return std::exp(p.k * std::log(static_cast<double>(p.s_min) / s));
}

double survival(const LognormalParams& p, double s) {
    check_params(p);
    if (s < static_cast<double>(p.s_min))
        throw std::domain_error("lognormal survival: s below s_min");
    if (s == static_cast<double>(p.s_min)) return 1.0;
    const double z = (std::log(s - static_cast<double>(p.s_min)) - p.mu) / (p.sigma * std::sqrt(2.0));
    return std::erfc(z) / 2.0;
}

double survival(const DistParams& dist, double s) {
    return std::visit([s](const auto& p) { return survival(p, s); }, dist);
}

std::int64_t dist_s_min(const DistParams& dist) {
    return std::visit([](const auto& p) { return p.s_min; }, dist);
}

std::vector<double> bin_probs(const DistParams& dist, std::span<const std::int64_t> tail_boundaries) {
    if (tail_boundaries.empty())
        throw std::invalid_argument("bin_probs: no boundaries");
    if (tail_boundaries.front() != dist_s_min(dist))
        throw std::invalid_argument("bin_probs: first boundary " +
                                    std::to_string(tail_boundaries.front()) +
                                    " does not match distribution s_min " +
                                    std::to_string(dist_s_min(dist)));
    std::vector<double> probs;
    probs.reserve(tail_boundaries.size());
    double prev = survival(dist, static_cast<double>(tail_boundaries.front()));
    for (std::size_t i = 1; i < tail_boundaries.size(); ++i) {
        const double next = survival(dist, static_cast<double>(tail_boundaries[i]));
        probs.push_back(prev - next);
        prev = next;
    }
    probs.push_back(prev); // open-ended last bin
    return probs;
}

std::vector<double> bin_probs(const DistParams& dist, const BinScheme& scheme, std::size_t first_bin) {
    if (first_bin >= scheme.bin_count())
        throw std::invalid_argument("bin_probs: first_bin out of range");
    return bin_probs(dist, scheme.boundaries().subspan(first_bin));
}

std::vector<double> bin_probs(const DistParams& dist, const TruncatedSample& t) {
    return bin_probs(dist, t.boundaries());
}

double discrete_pmf(const DistParams& dist, std::int64_t s) {
    if (s < dist_s_min(dist))
        throw std::domain_error("discrete_pmf: s below s_min");
    return survival(dist, static_cast<double>(s)) - survival(dist, static_cast<double>(s) + 1.0);
}

} // namespace tailbin
