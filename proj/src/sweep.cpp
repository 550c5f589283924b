#include "tailbin/sweep.hpp"

#include <atomic>
#include <thread>

#include "tailbin/numerics.hpp"

namespace tailbin {

std::uint64_t derive_cell_seed(std::uint64_t master_seed, std::size_t cell_index,
                               std::size_t fit_index) {
    return splitmix64_at(splitmix64_at(master_seed, cell_index), fit_index);
}

namespace {

struct Cell {
    std::size_t dataset_index;
    std::int64_t s_min;
    std::size_t cell_index;
};

CellRecord base_record(const std::string& dataset, std::int64_t s_min, const char* test,
                       Family family, Estimator estimator) {
    CellRecord rec;
    rec.dataset = dataset;
    rec.s_min = s_min;
    rec.test = test;
    rec.family = family;
    rec.estimator = estimator;
    return rec;
}

std::vector<CellRecord> run_one_cell(const RunConfig& config, const Cell& cell,
                                     bool derive_seeds) {
    const BinnedSample& sample = config.datasets[cell.dataset_index];
    const std::string& dataset = sample.label();
    std::vector<CellRecord> records;

    std::string truncate_error;
    std::optional<TruncatedSample> t;
    try {
        t.emplace(truncate(sample, cell.s_min));
    } catch (const std::exception& e) {
        truncate_error = e.what();
    }

    auto fit_one = [&](Family family, Estimator estimator) {
        CellRecord rec = base_record(dataset, cell.s_min, "fit", family, estimator);
        if (!truncate_error.empty()) {
            rec.error = truncate_error;
            return rec;
        }
        try {
            rec.fit = fit(family, estimator, *t);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        return rec;
    };

    if (config.with_fits) {
        for (const auto& [family, estimator] : config.fits)
            records.push_back(fit_one(family, estimator));
    }

    if (config.with_gof) {
        for (std::size_t fi = 0; fi < config.fits.size(); ++fi) {
            const auto [family, estimator] = config.fits[fi];
            CellRecord rec = base_record(dataset, cell.s_min, "gof", family, estimator);
            const std::uint64_t seed = derive_seeds
                                           ? derive_cell_seed(config.seed, cell.cell_index, fi)
                                           : config.seed;
            if (!truncate_error.empty()) {
                rec.error = truncate_error;
            } else {
                try {
                    rec.gof = gof_pvalue(family, estimator, *t, config.replicates, seed);
                } catch (const std::exception& e) {
                    rec.error = e.what();
                }
            }
            records.push_back(rec);
        }
    }

    if (config.with_compare) {
        // Comparisons always use the ML fits regardless of which fit combos
        // were requested.
        CellRecord vuong_pl = base_record(dataset, cell.s_min, "vuong", Family::pareto, Estimator::mle);
        CellRecord vuong_zl = base_record(dataset, cell.s_min, "vuong", Family::zipf, Estimator::fixed);
        CellRecord lrt_rec = base_record(dataset, cell.s_min, "zipf_lrt", Family::pareto, Estimator::mle);
        if (!truncate_error.empty()) {
            vuong_pl.error = vuong_zl.error = lrt_rec.error = truncate_error;
        } else {
            std::optional<FitResult> lognormal;
            try {
                lognormal = fit_lognormal_mle(*t);
            } catch (const std::exception& e) {
                vuong_pl.error = vuong_zl.error = e.what();
            }
            if (lognormal) {
                try {
                    vuong_pl.vuong = vuong_test(fit_pareto_mle(*t), *lognormal, *t, config.alpha);
                } catch (const std::exception& e) {
                    vuong_pl.error = e.what();
                }
                try {
                    vuong_zl.vuong = vuong_test(fit_zipf(*t), *lognormal, *t, config.alpha);
                } catch (const std::exception& e) {
                    vuong_zl.error = e.what();
                }
            }
            try {
                lrt_rec.lrt = zipf_lrt(*t);
            } catch (const std::exception& e) {
                lrt_rec.error = e.what();
            }
        }
        records.push_back(vuong_pl);
        records.push_back(vuong_zl);
        records.push_back(lrt_rec);
    }

    return records;
}

} // namespace

SweepResult run_cells(const RunConfig& config) {
    std::vector<Cell> cells;
    cells.reserve(config.datasets.size() * config.s_min_values.size());
    for (std::size_t d = 0; d < config.datasets.size(); ++d)
        for (const std::int64_t s_min : config.s_min_values)
            cells.push_back({d, s_min, cells.size()});

    const std::size_t gof_records =
        config.with_gof ? cells.size() * config.fits.size() : 0;
    const bool derive_seeds = gof_records > 1;

    std::vector<std::vector<CellRecord>> per_cell(cells.size());
    unsigned jobs = config.jobs ? config.jobs : std::thread::hardware_concurrency();
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));

    if (jobs <= 1) {
        for (const Cell& cell : cells)
            per_cell[cell.cell_index] = run_one_cell(config, cell, derive_seeds);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) break;
                per_cell[i] = run_one_cell(config, cells[i], derive_seeds);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    for (auto& records : per_cell) {
        for (auto& rec : records) {
            if (!rec.error.empty()) result.had_errors = true;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

} // namespace tailbin
