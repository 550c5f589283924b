#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace tailbin {

inline double erf(double z) { return std::erf(z); }
inline double erfc(double z) { return std::erfc(z); }

// Inverse of erf on (-1, 1): erf(erf_inv(p)) == p to ~1e-15.
double erf_inv(double p);

// splitmix64 output at position `index` of the stream keyed by `seed`.
// Bijective in `index` for fixed seed, so positions never collide.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);

constexpr const char* kRngAlgorithm = "splitmix64-keyed mt19937_64";

// One reproducible random stream: stream `stream_id` under master `seed`.
// Identical (seed, stream_id) gives an identical draw sequence; distinct
// stream_ids are seeded from distinct splitmix64 outputs.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), engine_(splitmix64_at(seed, stream_id)) {}

    std::mt19937_64& engine() { return engine_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

// Multinomial draw by sequential conditional binomials; the returned counts
// always sum exactly to n. probs must be nonnegative and sum to 1 (1e-9).
std::vector<std::int64_t> multinomial_sample(RngStream& rng, std::int64_t n,
                                             std::span<const double> probs);

// Brent root find on [lo, hi]; requires f(lo) and f(hi) of opposite sign
// (or zero). Iterates never leave the initial bracket. Returns x with
// |f(x)| <= tol or bracket width <= tol.
template <typename F>
double solve_root_bracketed(F&& f, double lo, double hi, double tol = 1e-10) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::isnan(fa) || std::isnan(fb))
        throw std::invalid_argument("solve_root_bracketed: f not finite at a bracket endpoint");
    if ((fa > 0) == (fb > 0))
        throw std::invalid_argument("solve_root_bracketed: no sign change on bracket");

    // c tracks the previous best; standard inverse-quadratic/secant steps
    // with bisection fallback.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double eps = std::numeric_limits<double>::epsilon();
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0 || std::fabs(fb) <= tol) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        if (std::fabs(d) > tol1)
            b += d;
        else
            b += (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if (fb == 0.0) return b;
    }
    return b;
}

} // namespace tailbin
