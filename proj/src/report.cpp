#include "tailbin/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "tailbin/numerics.hpp"

namespace tailbin {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fit_tag(Family f, Estimator e) {
    return std::string(to_string(f)) + ":" + to_string(e);
}

void append_params(ordered_json& j, const DistParams& params) {
    if (const auto* pareto = std::get_if<ParetoParams>(&params)) {
        j["k"] = pareto->k;
    } else {
        const auto& ln = std::get<LognormalParams>(params);
        j["mu"] = ln.mu;
        j["sigma"] = ln.sigma;
    }
}

ordered_json record_json(const CellRecord& rec) {
    ordered_json j;
    j["dataset"] = rec.dataset;
    j["s_min"] = rec.s_min;
    j["test"] = rec.test;
    j["family"] = to_string(rec.family);
    j["estimator"] = to_string(rec.estimator);
    if (!rec.error.empty()) {
        j["error"] = rec.error;
        return j;
    }
    if (rec.fit) {
        append_params(j, rec.fit->params);
        j["loglik"] = rec.fit->loglik;
        j["r2"] = rec.fit->r2_centered;
        j["n"] = rec.fit->n;
        if (!rec.fit->notes.empty()) j["notes"] = rec.fit->notes;
    }
    if (rec.gof) {
        j["d_star"] = rec.gof->d_star;
        j["p_value"] = rec.gof->p_value;
        j["replicates"] = rec.gof->replicates;
        j["excluded"] = rec.gof->excluded;
        j["seed"] = rec.gof->seed;
    }
    if (rec.vuong) {
        j["opponent"] = fit_tag(rec.vuong->family_b, rec.vuong->estimator_b);
        j["r"] = rec.vuong->r;
        j["r_n"] = rec.vuong->r_n;
        j["sigma2"] = rec.vuong->sigma2;
        j["p_value"] = rec.vuong->p_value;
        j["alpha"] = rec.vuong->alpha;
        j["winner"] = to_string(rec.vuong->winner);
        j["degenerate"] = rec.vuong->degenerate;
    }
    if (rec.lrt) {
        j["r_abs"] = rec.lrt->r_abs;
        j["statistic"] = rec.lrt->statistic;
        j["p_value"] = rec.lrt->p_value;
    }
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

ordered_json report_json(const RunConfig& config, const SweepResult& result,
                         std::string_view command) {
    ordered_json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["command"] = std::string(command);
    meta["rng"] = kRngAlgorithm;
    meta["seed"] = config.seed;
    meta["replicates"] = config.replicates;
    meta["alpha"] = config.alpha;
    ordered_json datasets = ordered_json::array();
    for (const auto& d : config.datasets) datasets.push_back(d.label());
    meta["datasets"] = std::move(datasets);
    meta["s_min"] = config.s_min_values;
    ordered_json fits = ordered_json::array();
    for (const auto& [family, estimator] : config.fits) fits.push_back(fit_tag(family, estimator));
    meta["fits"] = std::move(fits);

    ordered_json records = ordered_json::array();
    for (const auto& rec : result.records) records.push_back(record_json(rec));

    ordered_json report;
    report["meta"] = std::move(meta);
    report["records"] = std::move(records);
    return report;
}

std::string report_csv(const SweepResult& result) {
    std::string out =
        "dataset,s_min,test,family,estimator,opponent,k,mu,sigma,loglik,r2,n,"
        "d_star,p_value,replicates,excluded,r,r_n,sigma2,winner,statistic,alpha,seed,error\n";
    for (const auto& rec : result.records) {
        std::string k, mu, sigma, loglik, r2, n, d_star, p_value, replicates, excluded;
        std::string r, r_n, sigma2, winner, statistic, alpha, seed, opponent;
        if (rec.fit) {
            if (const auto* pareto = std::get_if<ParetoParams>(&rec.fit->params))
                k = format_double(pareto->k);
            else {
                const auto& ln = std::get<LognormalParams>(rec.fit->params);
                mu = format_double(ln.mu);
                sigma = format_double(ln.sigma);
            }
            loglik = format_double(rec.fit->loglik);
            r2 = format_double(rec.fit->r2_centered);
            n = std::to_string(rec.fit->n);
        }
        if (rec.gof) {
            d_star = format_double(rec.gof->d_star);
            p_value = format_double(rec.gof->p_value);
            replicates = std::to_string(rec.gof->replicates);
            excluded = std::to_string(rec.gof->excluded);
            seed = std::to_string(rec.gof->seed);
        }
        if (rec.vuong) {
            opponent = fit_tag(rec.vuong->family_b, rec.vuong->estimator_b);
            r = format_double(rec.vuong->r);
            r_n = format_double(rec.vuong->r_n);
            sigma2 = format_double(rec.vuong->sigma2);
            p_value = format_double(rec.vuong->p_value);
            alpha = format_double(rec.vuong->alpha);
            winner = rec.vuong->degenerate ? "degenerate" : to_string(rec.vuong->winner);
        }
        if (rec.lrt) {
            r = format_double(rec.lrt->r_abs);
            statistic = format_double(rec.lrt->statistic);
            p_value = format_double(rec.lrt->p_value);
        }
        out += csv_escape(rec.dataset) + ',' + std::to_string(rec.s_min) + ',' + rec.test + ',' +
               to_string(rec.family) + ',' + to_string(rec.estimator) + ',' + opponent + ',' + k +
               ',' + mu + ',' + sigma + ',' + loglik + ',' + r2 + ',' + n + ',' + d_star + ',' +
               p_value + ',' + replicates + ',' + excluded + ',' + r + ',' + r_n + ',' + sigma2 +
               ',' + winner + ',' + statistic + ',' + alpha + ',' + seed + ',' +
               csv_escape(rec.error) + '\n';
    }
    return out;
}

} // namespace tailbin
