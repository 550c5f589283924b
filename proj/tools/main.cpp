#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailbin/fixtures.hpp"
#include "tailbin/report.hpp"
#include "tailbin/sweep.hpp"

namespace {

using namespace tailbin;

struct Options {
    std::vector<std::string> fixtures;
    bool fixture_all = false;
    std::string input_path;
    std::string input_label;
    std::vector<std::int64_t> s_min;
    std::vector<std::string> families;
    std::vector<std::string> estimators;
    int replicates = 10000;
    std::uint64_t seed = 1;
    bool seed_given = false;
    double alpha = 0.1;
    std::string format = "json";
    std::string output;
    unsigned jobs = 0;
    bool table2 = false;
    std::string series = "survival";
    double clamp = 0.0;
    bool clamp_given = false;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data (as opposed to bad flags): reported as a machine-readable
// error document on the normal output stream.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed_env(const char* text) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text, &end, 10);
    if (end == text || *end != '\0')
        throw ConfigError("TAILBIN_SEED is not an unsigned integer: '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<BinnedSample> load_datasets(const Options& opt, bool default_all_fixtures) {
    std::vector<BinnedSample> datasets;
    if (!opt.input_path.empty()) {
        std::ifstream in(opt.input_path);
        if (!in) throw ConfigError("cannot open input file '" + opt.input_path + "'");
        const std::string label = opt.input_label.empty() ? opt.input_path : opt.input_label;
        try {
            datasets.push_back(parse_binned_csv(in, label));
        } catch (const std::exception& e) {
            throw InputError("parse error in '" + opt.input_path + "': " + e.what());
        }
    }
    try {
        if (opt.fixture_all || (default_all_fixtures && opt.fixtures.empty() && datasets.empty())) {
            for (const auto& sel : fixture_selectors()) datasets.push_back(fixture(sel));
        } else {
            for (const auto& sel : opt.fixtures) datasets.push_back(fixture(sel));
        }
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (datasets.empty())
        throw ConfigError("no input: pass --fixture <group>:<year>, --fixture-all, or --input <csv>");
    return datasets;
}

std::vector<std::pair<Family, Estimator>> build_fit_list(const Options& opt) {
    std::vector<Family> families;
    if (opt.families.empty()) {
        families = {Family::pareto, Family::zipf, Family::lognormal};
    } else {
        for (const auto& f : opt.families) families.push_back(family_from_string(f));
    }
    std::vector<Estimator> requested;
    for (const auto& e : opt.estimators) requested.push_back(estimator_from_string(e));

    const auto supported = [](Family f) -> std::vector<Estimator> {
        switch (f) {
            case Family::pareto: return {Estimator::mle, Estimator::ols};
            case Family::zipf: return {Estimator::fixed};
            case Family::lognormal: return {Estimator::mle};
        }
        return {};
    };

    std::vector<std::pair<Family, Estimator>> fits;
    for (const Family f : families) {
        std::vector<Estimator> chosen;
        if (requested.empty()) {
            chosen = supported(f);
        } else {
            for (const Estimator e : supported(f))
                if (std::find(requested.begin(), requested.end(), e) != requested.end())
                    chosen.push_back(e);
            if (chosen.empty())
                throw ConfigError(std::string("family '") + to_string(f) +
                                  "' does not support any of the requested estimators");
        }
        for (const Estimator e : chosen) fits.emplace_back(f, e);
    }
    return fits;
}

std::vector<std::int64_t> resolve_s_min(const Options& opt,
                                        const std::vector<BinnedSample>& datasets,
                                        bool need_lognormal) {
    const std::size_t min_bins = need_lognormal ? 4 : 2;
    std::vector<std::int64_t> values = opt.s_min;
    if (values.empty()) {
        for (const std::int64_t candidate : {5, 10, 20, 30, 50}) {
            bool ok = true;
            for (const auto& d : datasets) {
                try {
                    const std::size_t j = d.scheme().index_of(candidate);
                    if (d.scheme().bin_count() - j < min_bins) ok = false;
                } catch (const std::exception&) {
                    ok = false;
                }
            }
            if (ok) values.push_back(candidate);
        }
        if (values.empty())
            throw ConfigError("no default s_min value fits the input scheme; pass --smin");
        return values;
    }
    for (const std::int64_t v : values) {
        for (const auto& d : datasets) {
            std::size_t j;
            try {
                j = d.scheme().index_of(v);
            } catch (const std::exception&) {
                throw ConfigError("--smin " + std::to_string(v) + " is not a boundary of dataset '" +
                                  d.label() + "'");
            }
            if (d.scheme().bin_count() - j < min_bins)
                throw ConfigError("--smin " + std::to_string(v) + " leaves fewer than " +
                                  std::to_string(min_bins) + " bins in dataset '" + d.label() +
                                  "'" + (need_lognormal ? " (required for lognormal fitting)" : ""));
        }
    }
    return values;
}

RunConfig build_config(const Options& opt, bool default_all_fixtures, bool with_fits,
                       bool with_gof, bool with_compare) {
    if (opt.replicates < 1) throw ConfigError("--replicates must be >= 1");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw ConfigError("--alpha must be in (0, 1)");
    if (opt.format != "json" && opt.format != "csv")
        throw ConfigError("--format must be json or csv");

    RunConfig config;
    config.datasets = load_datasets(opt, default_all_fixtures);
    config.fits = build_fit_list(opt);
    const bool need_lognormal =
        with_compare || std::any_of(config.fits.begin(), config.fits.end(),
                                    [](const auto& fe) { return fe.first == Family::lognormal; });
    config.s_min_values = resolve_s_min(opt, config.datasets, need_lognormal);
    config.with_fits = with_fits;
    config.with_gof = with_gof;
    config.with_compare = with_compare;
    config.replicates = opt.replicates;
    config.alpha = opt.alpha;
    config.jobs = opt.jobs;
    config.seed = opt.seed;
    if (!opt.seed_given) {
        if (const char* env = std::getenv("TAILBIN_SEED"))
            config.seed = parse_seed_env(env);
    }
    return config;
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + opt.output + "'");
    out << text;
}

std::string render_report(const Options& opt, const RunConfig& config, const SweepResult& result,
                          std::string_view command) {
    if (opt.format == "csv") return report_csv(result);
    return report_json(config, result, command).dump(2) + "\n";
}

// Percent table (one decimal) of empirical and fitted bin probabilities.
std::string render_table2(const RunConfig& config) {
    std::string out;
    char buf[64];
    for (const auto& sample : config.datasets) {
        for (const std::int64_t s_min : config.s_min_values) {
            const TruncatedSample t = truncate(sample, s_min);
            const auto bounds = t.boundaries();
            const auto counts = t.counts();

            std::vector<std::string> headers = {"empirical"};
            std::vector<std::vector<double>> columns;
            {
                std::vector<double> emp;
                for (std::size_t i = 0; i < counts.size(); ++i)
                    emp.push_back(100.0 * static_cast<double>(counts[i]) /
                                  static_cast<double>(t.total()));
                columns.push_back(std::move(emp));
            }
            for (const auto& [family, estimator] : config.fits) {
                const FitResult f = fit(family, estimator, t);
                const auto probs = bin_probs(f.params, t);
                std::vector<double> col;
                for (const double p : probs) col.push_back(100.0 * p);
                headers.push_back(std::string(to_string(family)) + ":" + to_string(estimator));
                columns.push_back(std::move(col));
            }

            out += sample.label() + "  s_min=" + std::to_string(s_min) + "\n";
            std::snprintf(buf, sizeof buf, "%-14s", "bin");
            out += buf;
            for (const auto& h : headers) {
                std::snprintf(buf, sizeof buf, "%14s", h.c_str());
                out += buf;
            }
            out += '\n';
            for (std::size_t i = 0; i < counts.size(); ++i) {
                std::string bin_label;
                if (i + 1 < counts.size())
                    bin_label = "[" + std::to_string(bounds[i]) + ", " +
                                std::to_string(bounds[i + 1]) + ")";
                else
                    bin_label = "[" + std::to_string(bounds[i]) + ", inf)";
                std::snprintf(buf, sizeof buf, "%-14s", bin_label.c_str());
                out += buf;
                for (const auto& col : columns) {
                    std::snprintf(buf, sizeof buf, "%14.1f", col[i]);
                    out += buf;
                }
                out += '\n';
            }
            out += '\n';
        }
    }
    return out;
}

std::string render_plotdata(const Options& opt, const RunConfig& config) {
    std::string out;
    if (opt.series == "survival") {
        const bool single =
            config.datasets.size() == 1 && config.s_min_values.size() == 1;
        out = single ? "boundary,empirical_survival" : "dataset,s_min,boundary,empirical_survival";
        for (const auto& [family, estimator] : config.fits)
            out += std::string(",") + to_string(family) + "_" + to_string(estimator);
        out += '\n';
        for (const auto& sample : config.datasets) {
            for (const std::int64_t s_min : config.s_min_values) {
                const TruncatedSample t = truncate(sample, s_min);
                std::vector<FitResult> fits;
                for (const auto& [family, estimator] : config.fits)
                    fits.push_back(fit(family, estimator, t));
                for (const auto& [boundary, p_hat] : empirical_survival(t)) {
                    std::string row;
                    if (!single) row += sample.label() + ',' + std::to_string(s_min) + ',';
                    row += std::to_string(boundary) + ',' + format_double(p_hat);
                    for (const auto& f : fits)
                        row += ',' + format_double(survival(f.params, static_cast<double>(boundary)));
                    out += row + '\n';
                }
            }
        }
        return out;
    }
    if (opt.series == "vuong") {
        out = "dataset,s_min,comparison,r_n\n";
        for (const auto& sample : config.datasets) {
            for (const std::int64_t s_min : config.s_min_values) {
                const TruncatedSample t = truncate(sample, s_min);
                const FitResult lognormal = fit_lognormal_mle(t);
                const auto emit = [&](const FitResult& a, const char* name) {
                    const VuongReport v = vuong_test(a, lognormal, t, config.alpha);
                    double r_n = v.r_n;
                    if (opt.clamp_given) r_n = std::clamp(r_n, -opt.clamp, opt.clamp);
                    out += sample.label() + ',' + std::to_string(s_min) + ',' + name + ',' +
                           format_double(r_n) + '\n';
                };
                emit(fit_pareto_mle(t), "pareto_vs_lognormal");
                emit(fit_zipf(t), "zipf_vs_lognormal");
            }
        }
        return out;
    }
    throw ConfigError("--series must be survival or vuong");
}

CLI::Option* add_common_options(CLI::App* cmd, Options& opt, bool with_replicates) {
    cmd->add_option("--fixture", opt.fixtures,
                    "built-in dataset selector <group>:<year> (repeatable)");
    cmd->add_flag("--fixture-all", opt.fixture_all, "use all 24 built-in datasets");
    cmd->add_option("--input", opt.input_path, "binned CSV input (header lower,count)");
    cmd->add_option("--label", opt.input_label, "dataset label for --input");
    cmd->add_option("--smin", opt.s_min, "support lower bound(s); must be bin boundaries");
    cmd->add_option("--family", opt.families, "pareto|zipf|lognormal (repeatable)");
    cmd->add_option("--estimator", opt.estimators, "mle|ols|fixed (repeatable)");
    auto* seed = cmd->add_option("--seed", opt.seed, "master seed (fallback: TAILBIN_SEED, then 1)");
    if (with_replicates)
        cmd->add_option("--replicates", opt.replicates, "bootstrap replicates (default 10000)");
    cmd->add_option("--alpha", opt.alpha, "significance level (default 0.1)");
    cmd->add_option("--format", opt.format, "json|csv (default json)");
    cmd->add_option("--output", opt.output, "output path (default stdout)");
    cmd->add_option("--jobs", opt.jobs, "worker threads (default: hardware)");
    return seed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"binned heavy-tail fitting, goodness-of-fit, and model comparison"};
    app.require_subcommand(1);

    Options opt;
    std::vector<CLI::Option*> seed_options;

    auto* cmd_fit = app.add_subcommand("fit", "fit distributions and report parameters/R2");
    seed_options.push_back(add_common_options(cmd_fit, opt, false));
    cmd_fit->add_flag("--table2", opt.table2, "print bin probabilities as a percent table");

    auto* cmd_gof = app.add_subcommand("gof", "fits plus parametric-bootstrap KS p-values");
    seed_options.push_back(add_common_options(cmd_gof, opt, true));

    auto* cmd_compare = app.add_subcommand("compare",
                                           "Vuong tests vs lognormal and the k=1 likelihood-ratio test");
    seed_options.push_back(add_common_options(cmd_compare, opt, false));

    auto* cmd_plotdata = app.add_subcommand("plotdata", "CSV series for external plotting");
    seed_options.push_back(add_common_options(cmd_plotdata, opt, false));
    cmd_plotdata->add_option("--series", opt.series, "survival|vuong (default survival)");
    auto* clamp = cmd_plotdata->add_option("--clamp", opt.clamp, "clamp vuong r_n to [-x, x]");

    auto* cmd_sweep = app.add_subcommand("sweep", "full fit+gof+compare grid over datasets and s_min");
    seed_options.push_back(add_common_options(cmd_sweep, opt, true));

    CLI11_PARSE(app, argc, argv);

    for (const CLI::Option* o : seed_options)
        if (o->count() > 0) opt.seed_given = true;
    opt.clamp_given = clamp->count() > 0;

    try {
        if (cmd_fit->parsed()) {
            const RunConfig config = build_config(opt, false, true, false, false);
            if (opt.table2) {
                write_output(opt, render_table2(config));
                return 0;
            }
            const SweepResult result = run_cells(config);
            write_output(opt, render_report(opt, config, result, "fit"));
            return result.had_errors ? 1 : 0;
        }
        if (cmd_gof->parsed()) {
            const RunConfig config = build_config(opt, false, true, true, false);
            const SweepResult result = run_cells(config);
            write_output(opt, render_report(opt, config, result, "gof"));
            return result.had_errors ? 1 : 0;
        }
        if (cmd_compare->parsed()) {
            const RunConfig config = build_config(opt, false, false, false, true);
            const SweepResult result = run_cells(config);
            write_output(opt, render_report(opt, config, result, "compare"));
            return result.had_errors ? 1 : 0;
        }
        if (cmd_plotdata->parsed()) {
            const RunConfig config = build_config(opt, false, true, false, false);
            write_output(opt, render_plotdata(opt, config));
            return 0;
        }
        const RunConfig config = build_config(opt, true, true, true, true);
        const SweepResult result = run_cells(config);
        write_output(opt, render_report(opt, config, result, "sweep"));
        return result.had_errors ? 1 : 0;
    } catch (const InputError& e) {
        nlohmann::ordered_json err;
        err["tool"] = kToolName;
        err["version"] = kToolVersion;
        err["error"] = e.what();
        try {
            write_output(opt, err.dump(2) + "\n");
        } catch (const std::exception&) {
            std::cerr << err.dump(2) << "\n";
        }
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
