#include "tailbin/numerics.hpp"

#include <cmath>
#include <numbers>

namespace tailbin {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double erf_inv(double p) {
    if (!(std::fabs(p) < 1.0))
        throw std::invalid_argument("erf_inv: argument must be in (-1, 1)");
    if (p == 0.0) return 0.0;
    // erf saturates to +-1 in double well inside |z| = 6.5, so the bracket
    // always straddles the root.
    double x = solve_root_bracketed([p](double z) { return std::erf(z) - p; }, -6.5, 6.5, 1e-15);
    // One Newton step against erf'(z) = (2/sqrt(pi)) e^{-z^2}.
    const double deriv = 2.0 * std::numbers::inv_sqrtpi * std::exp(-x * x);
    if (deriv > 0) x -= (std::erf(x) - p) / deriv;
    return x;
}

std::vector<std::int64_t> multinomial_sample(RngStream& rng, std::int64_t n,
                                             std::span<const double> probs) {
    if (n < 0) throw std::invalid_argument("multinomial_sample: n must be nonnegative");
    if (probs.empty()) throw std::invalid_argument("multinomial_sample: empty probability vector");
    double sum = 0.0;
    for (const double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("multinomial_sample: negative probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("multinomial_sample: probabilities sum to " +
                                    std::to_string(sum) + ", not 1");

    std::vector<std::int64_t> counts(probs.size(), 0);
    std::int64_t remaining = n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        if (remaining == 0) break;
        double p = probs[i] / mass_left;
        if (p >= 1.0 || !(mass_left > 0.0)) {
            counts[i] = remaining;
            remaining = 0;
            break;
        }
        if (p > 0.0) {
            std::binomial_distribution<std::int64_t> binom(remaining, p);
            counts[i] = binom(rng.engine());
            remaining -= counts[i];
        }
        mass_left -= probs[i];
    }
    counts.back() += remaining;
    return counts;
}

} // namespace tailbin
