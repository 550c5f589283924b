#include "tailbin/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailbin/numerics.hpp"

namespace tailbin {

const char* to_string(Family f) {
    switch (f) {
        case Family::pareto: return "pareto";
        case Family::zipf: return "zipf";
        case Family::lognormal: return "lognormal";
    }
    return "?";
}

const char* to_string(Estimator e) {
    switch (e) {
        case Estimator::ols: return "ols";
        case Estimator::mle: return "mle";
        case Estimator::fixed: return "fixed";
    }
    return "?";
}

Family family_from_string(std::string_view s) {
    if (s == "pareto") return Family::pareto;
    if (s == "zipf") return Family::zipf;
    if (s == "lognormal") return Family::lognormal;
    throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

Estimator estimator_from_string(std::string_view s) {
    if (s == "ols") return Estimator::ols;
    if (s == "mle") return Estimator::mle;
    if (s == "fixed") return Estimator::fixed;
    throw std::invalid_argument("unknown estimator '" + std::string(s) + "'");
}

namespace {

// Log-log survival points at the truncated boundaries. Boundaries at or past
// the first zero empirical survival carry no information and are dropped.
struct SurvivalPoints {
    std::vector<double> x; // ln(s_min / b_i), first is 0
    std::vector<double> y; // ln Phat(S >= b_i), first is 0
    bool dropped = false;
};

SurvivalPoints log_survival_points(const TruncatedSample& t) {
    SurvivalPoints pts;
    const auto bounds = t.boundaries();
    const auto counts = t.counts();
    const double n = static_cast<double>(t.total());
    std::int64_t tail = t.total();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (tail <= 0) {
            pts.dropped = true;
            break;
        }
        pts.x.push_back(std::log(static_cast<double>(t.s_min()) / static_cast<double>(bounds[i])));
        pts.y.push_back(std::log(static_cast<double>(tail) / n));
        tail -= counts[i];
    }
    return pts;
}

void require_positive_s_min(const TruncatedSample& t, const char* who) {
    if (t.s_min() <= 0)
        throw std::domain_error(std::string(who) + ": support lower bound must be positive (s_min = " +
                                std::to_string(t.s_min()) + ")");
}

} // namespace

double log_likelihood(const DistParams& dist, const TruncatedSample& t) {
    if (dist_s_min(dist) != t.s_min())
        throw std::invalid_argument("log_likelihood: distribution s_min does not match sample");
    const auto probs = bin_probs(dist, t);
    const auto counts = t.counts();
    double ll = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (counts[i] == 0) continue;
        if (!(probs[i] > 0.0))
            throw std::runtime_error("log_likelihood: bin " + std::to_string(i) +
                                     " has zero probability but count " +
                                     std::to_string(counts[i]));
        ll += static_cast<double>(counts[i]) * std::log(probs[i]);
    }
    return ll;
}

FitResult fit_pareto_ols(const TruncatedSample& t) {
    require_positive_s_min(t, "fit_pareto_ols");
    const auto pts = log_survival_points(t);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        sxy += pts.x[i] * pts.y[i];
        sxx += pts.x[i] * pts.x[i];
    }
    if (sxx == 0.0)
        throw std::runtime_error("fit_pareto_ols: no usable boundary above s_min");
    const double k = sxy / sxx;
    if (!(k > 0.0))
        throw std::runtime_error("fit_pareto_ols: degenerate data (estimated exponent " +
                                 std::to_string(k) + " is not positive)");
    FitResult fit;
    fit.family = Family::pareto;
    fit.estimator = Estimator::ols;
    fit.params = ParetoParams{k, t.s_min()};
    fit.s_min = t.s_min();
    fit.n = t.total();
    if (pts.dropped)
        fit.notes.push_back("boundaries with zero empirical survival excluded from regression");
    fit.loglik = log_likelihood(fit.params, t);
    fit.r2_centered = r_squared_centered(fit.params, t);
    return fit;
}

namespace {

// d/dk of the binned Pareto log-likelihood. Interior pairs use the stable
// form (ln b_i - q ln b_{i+1}) / (1 - q) with q = (b_i/b_{i+1})^k.
double pareto_loglik_deriv(double k, std::span<const std::int64_t> bounds,
                           std::span<const std::int64_t> counts, std::int64_t n) {
    const std::size_t m = bounds.size();
    double val = static_cast<double>(n) * std::log(static_cast<double>(bounds.front())) -
                 static_cast<double>(counts[m - 1]) * std::log(static_cast<double>(bounds[m - 1]));
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (counts[i] == 0) continue;
        const double lb = std::log(static_cast<double>(bounds[i]));
        const double lb1 = std::log(static_cast<double>(bounds[i + 1]));
        const double tneg = k * (lb - lb1); // negative
        const double q = std::exp(tneg);
        const double one_minus_q = -std::expm1(tneg);
        val -= static_cast<double>(counts[i]) * (lb - q * lb1) / one_minus_q;
    }
    return val;
}

} // namespace

FitResult fit_pareto_mle(const TruncatedSample& t) {
    require_positive_s_min(t, "fit_pareto_mle");
    const auto bounds = t.boundaries();
    const auto counts = t.counts();
    std::int64_t beyond_first = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) beyond_first += counts[i];
    if (beyond_first == 0)
        throw std::runtime_error("fit_pareto_mle: degenerate data, all observations in the first "
                                 "bin (exponent unbounded)");

    const auto foc = [&](double k) { return pareto_loglik_deriv(k, bounds, counts, t.total()); };
    const double k_lo = 0.01, k_hi = 50.0;
    const double f_lo = foc(k_lo), f_hi = foc(k_hi);
    if ((f_lo > 0) == (f_hi > 0))
        throw std::runtime_error("fit_pareto_mle: no stationary point in [" +
                                 std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                                 "]; derivative endpoints " + std::to_string(f_lo) + ", " +
                                 std::to_string(f_hi));
    const double k = solve_root_bracketed(foc, k_lo, k_hi, 1e-12);
    const double resid = std::fabs(foc(k));
    if (resid > 1e-8 * static_cast<double>(t.total()))
        throw std::runtime_error("fit_pareto_mle: stationarity residual " + std::to_string(resid) +
                                 " too large");

    FitResult fit;
    fit.family = Family::pareto;
    fit.estimator = Estimator::mle;
    fit.params = ParetoParams{k, t.s_min()};
    fit.s_min = t.s_min();
    fit.n = t.total();
    fit.loglik = log_likelihood(fit.params, t);
    fit.r2_centered = r_squared_centered(fit.params, t);
    return fit;
}

FitResult fit_zipf(const TruncatedSample& t) {
    require_positive_s_min(t, "fit_zipf");
    FitResult fit;
    fit.family = Family::zipf;
    fit.estimator = Estimator::fixed;
    fit.params = ParetoParams{1.0, t.s_min()};
    fit.s_min = t.s_min();
    fit.n = t.total();
    fit.loglik = log_likelihood(fit.params, t);
    fit.r2_centered = r_squared_centered(fit.params, t);
    return fit;
}

namespace {

struct LognormalFoc {
    double f_mu = 0.0;
    double f_sigma = 0.0;
    bool valid = false;
};

// Stationarity conditions of the binned shifted-lognormal log-likelihood,
// written with erf'(z) = (2/sqrt(pi)) e^{-z^2} and positive factors removed.
LognormalFoc lognormal_foc(double mu, double sigma, std::span<const std::int64_t> bounds,
                           std::span<const std::int64_t> counts, std::int64_t s_min) {
    LognormalFoc out;
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) return out;
    const std::size_t m = bounds.size();
    const double sqrt2 = std::sqrt(2.0);
    std::vector<double> z(m, 0.0), w(m, 0.0), surv(m, 0.0);
    surv[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        z[i] = (std::log(static_cast<double>(bounds[i] - s_min)) - mu) / (sigma * sqrt2);
        w[i] = std::exp(-z[i] * z[i]);
        surv[i] = std::erfc(z[i]) / 2.0;
    }
    double f_mu = 0.0, f_sigma = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] == 0) continue;
        const double h = static_cast<double>(counts[i]);
        double num_mu, num_sigma, prob;
        if (i == 0) {
            prob = 1.0 - surv[1];
            num_mu = -w[1];
            num_sigma = -z[1] * w[1];
        } else if (i + 1 == m) {
            prob = surv[m - 1];
            num_mu = w[m - 1];
            num_sigma = z[m - 1] * w[m - 1];
        } else {
            prob = surv[i] - surv[i + 1];
            num_mu = w[i] - w[i + 1];
            num_sigma = z[i] * w[i] - z[i + 1] * w[i + 1];
        }
        if (!(prob > 0.0) || !std::isfinite(prob)) return out;
        f_mu += h * num_mu / prob;
        f_sigma += h * num_sigma / prob;
    }
    if (!std::isfinite(f_mu) || !std::isfinite(f_sigma)) return out;
    out.f_mu = f_mu;
    out.f_sigma = f_sigma;
    out.valid = true;
    return out;
}

double lognormal_loglik_or_lowest(double mu, double sigma, const TruncatedSample& t) {
    if (!(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
    try {
        return log_likelihood(DistParams{LognormalParams{mu, sigma, t.s_min()}}, t);
    } catch (const std::exception&) {
        return -std::numeric_limits<double>::infinity();
    }
}

// Count-weighted moments of ln(bin midpoint - s_min); the open bin uses 2*b_m.
void lognormal_start(const TruncatedSample& t, double& mu0, double& sigma0) {
    const auto bounds = t.boundaries();
    const auto counts = t.counts();
    const std::size_t m = bounds.size();
    double wsum = 0.0, mean = 0.0, msq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] == 0) continue;
        const double mid = (i + 1 < m)
                               ? 0.5 * static_cast<double>(bounds[i] + bounds[i + 1])
                               : 2.0 * static_cast<double>(bounds[m - 1]);
        const double lx = std::log(mid - static_cast<double>(t.s_min()));
        const double h = static_cast<double>(counts[i]);
        wsum += h;
        mean += h * lx;
        msq += h * lx * lx;
    }
    mean /= wsum;
    const double var = std::max(msq / wsum - mean * mean, 0.0);
    mu0 = mean;
    sigma0 = std::max(std::sqrt(var), 0.1);
}

struct NewtonOutcome {
    double mu = 0.0;
    double sigma = 0.0;
    bool converged = false;
};

NewtonOutcome lognormal_newton(double mu, double sigma, const TruncatedSample& t) {
    const auto bounds = t.boundaries();
    const auto counts = t.counts();
    const double n = static_cast<double>(t.total());
    const double target = 1e-9 * n;
    NewtonOutcome out;
    auto foc = [&](double m_, double s_) { return lognormal_foc(m_, s_, bounds, counts, t.s_min()); };

    LognormalFoc f = foc(mu, sigma);
    if (!f.valid) return out;
    for (int iter = 0; iter < 80; ++iter) {
        const double fnorm = std::max(std::fabs(f.f_mu), std::fabs(f.f_sigma));
        if (fnorm <= target) {
            out = {mu, sigma, true};
            return out;
        }
        const double h_mu = 1e-6 * (1.0 + std::fabs(mu));
        const double h_sigma = 1e-6 * sigma;
        const LognormalFoc fm = foc(mu + h_mu, sigma);
        const LognormalFoc fs = foc(mu, sigma + h_sigma);
        if (!fm.valid || !fs.valid) return out;
        const double j11 = (fm.f_mu - f.f_mu) / h_mu;
        const double j12 = (fs.f_mu - f.f_mu) / h_sigma;
        const double j21 = (fm.f_sigma - f.f_sigma) / h_mu;
        const double j22 = (fs.f_sigma - f.f_sigma) / h_sigma;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) return out;
        const double step_mu = -(j22 * f.f_mu - j12 * f.f_sigma) / det;
        const double step_sigma = -(-j21 * f.f_mu + j11 * f.f_sigma) / det;

        double lambda = 1.0;
        bool advanced = false;
        for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
            const double mu_try = mu + lambda * step_mu;
            const double sigma_try = sigma + lambda * step_sigma;
            if (!(sigma_try > 1e-9)) continue;
            const LognormalFoc f_try = foc(mu_try, sigma_try);
            if (!f_try.valid) continue;
            if (std::max(std::fabs(f_try.f_mu), std::fabs(f_try.f_sigma)) < fnorm) {
                mu = mu_try;
                sigma = sigma_try;
                f = f_try;
                advanced = true;
                break;
            }
        }
        if (!advanced) return out;
    }
    return out;
}

} // namespace

FitResult fit_lognormal_mle(const TruncatedSample& t) {
    if (t.s_min() < 1)
        throw std::domain_error("fit_lognormal_mle: shift s_min must be a positive integer");
    if (t.bin_count() < 4)
        throw std::invalid_argument("fit_lognormal_mle: need at least 4 bins above s_min, have " +
                                    std::to_string(t.bin_count()));

    std::vector<std::string> notes;
    double mu0 = 0.0, sigma0 = 1.0;
    lognormal_start(t, mu0, sigma0);

    NewtonOutcome sol = lognormal_newton(mu0, sigma0, t);
    if (!sol.converged) {
        // Coarse likelihood grid around the moment start, then Newton again.
        double best_ll = -std::numeric_limits<double>::infinity();
        double best_mu = mu0, best_sigma = sigma0;
        for (int i = 0; i < 61; ++i) {
            const double mu = mu0 - 4.0 + i * (8.0 / 60.0);
            for (int j = 0; j < 61; ++j) {
                const double sigma = 0.05 * std::pow(100.0, j / 60.0); // 0.05 .. 5
                const double ll = lognormal_loglik_or_lowest(mu, sigma, t);
                if (ll > best_ll) {
                    best_ll = ll;
                    best_mu = mu;
                    best_sigma = sigma;
                }
            }
        }
        sol = lognormal_newton(best_mu, best_sigma, t);
        if (!sol.converged) {
            notes.push_back("newton did not converge; reporting best grid point");
            sol = {best_mu, best_sigma, false};
        } else {
            notes.push_back("newton restarted from likelihood grid");
        }
    }

    if (!(sol.sigma > 1e-6))
        throw std::runtime_error("fit_lognormal_mle: sigma collapsed below 1e-6");

    // Local 50x50 optimality check; on failure restart Newton from the best
    // competing point (at most twice).
    bool verified = false;
    for (int attempt = 0; attempt < 3 && !verified; ++attempt) {
        const double ll_hat = lognormal_loglik_or_lowest(sol.mu, sol.sigma, t);
        const double slack = 1e-9 * (1.0 + std::fabs(ll_hat));
        double best_ll = ll_hat;
        double best_mu = sol.mu, best_sigma = sol.sigma;
        for (int i = 0; i < 50; ++i) {
            const double mu = sol.mu - 0.25 + i * (0.5 / 49.0);
            for (int j = 0; j < 50; ++j) {
                const double sigma = sol.sigma * std::pow(0.8, 1.0 - 2.0 * j / 49.0); // 0.8x .. 1.25x
                const double ll = lognormal_loglik_or_lowest(mu, sigma, t);
                if (ll > best_ll) {
                    best_ll = ll;
                    best_mu = mu;
                    best_sigma = sigma;
                }
            }
        }
        if (best_ll <= ll_hat + slack) {
            verified = true;
            break;
        }
        const NewtonOutcome retry = lognormal_newton(best_mu, best_sigma, t);
        if (retry.converged) {
            sol = retry;
            notes.push_back("solution re-converged from a better grid point");
        } else {
            throw std::runtime_error("fit_lognormal_mle: local grid found a better point but "
                                     "newton did not re-converge");
        }
    }
    if (!verified)
        throw std::runtime_error("fit_lognormal_mle: solution failed the local-grid optimality "
                                 "check after restarts");

    FitResult fit;
    fit.family = Family::lognormal;
    fit.estimator = Estimator::mle;
    fit.params = LognormalParams{sol.mu, sol.sigma, t.s_min()};
    fit.s_min = t.s_min();
    fit.n = t.total();
    fit.notes = std::move(notes);
    fit.loglik = log_likelihood(fit.params, t);
    fit.r2_centered = r_squared_centered(fit.params, t);
    return fit;
}

FitResult fit(Family family, Estimator estimator, const TruncatedSample& t) {
    if (family == Family::pareto && estimator == Estimator::ols) return fit_pareto_ols(t);
    if (family == Family::pareto && estimator == Estimator::mle) return fit_pareto_mle(t);
    if (family == Family::zipf && estimator == Estimator::fixed) return fit_zipf(t);
    if (family == Family::lognormal && estimator == Estimator::mle) return fit_lognormal_mle(t);
    throw std::invalid_argument(std::string("unsupported fit combination ") + to_string(family) +
                                ":" + to_string(estimator));
}

double r_squared_centered(const DistParams& params, const TruncatedSample& t) {
    const auto pts = log_survival_points(t);
    if (pts.y.size() < 2)
        throw std::domain_error("r_squared_centered: fewer than 2 usable boundary points");
    const auto bounds = t.boundaries();
    double ybar = 0.0;
    for (const double y : pts.y) ybar += y;
    ybar /= static_cast<double>(pts.y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < pts.y.size(); ++i) {
        const double yhat = std::log(survival(params, static_cast<double>(bounds[i])));
        ss_res += (pts.y[i] - yhat) * (pts.y[i] - yhat);
        ss_tot += (pts.y[i] - ybar) * (pts.y[i] - ybar);
    }
    if (ss_tot == 0.0)
        throw std::domain_error("r_squared_centered: observed log-survival values are all equal");
    return 1.0 - ss_res / ss_tot;
}

double r_squared_centered(const FitResult& fit, const TruncatedSample& t) {
    if (fit.s_min != t.s_min())
        throw std::invalid_argument("r_squared_centered: fit and sample s_min differ");
    return r_squared_centered(fit.params, t);
}

} // namespace tailbin
