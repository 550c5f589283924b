#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tailbin/binned_data.hpp"
#include "tailbin/estimation.hpp"
#include "tailbin/gof.hpp"
#include "tailbin/model_compare.hpp"

namespace tailbin {

struct RunConfig {
    std::vector<BinnedSample> datasets;  // labels identify datasets in records
    std::vector<std::int64_t> s_min_values;
    std::vector<std::pair<Family, Estimator>> fits;
    bool with_fits = true;
    bool with_gof = false;
    bool with_compare = false;
    int replicates = 10000;
    std::uint64_t seed = 1;
    double alpha = 0.1;
    unsigned jobs = 0; // 0 = hardware concurrency
};

// One output record; exactly one of fit/gof/vuong/lrt is set unless the
// cell failed, in which case `error` is set instead.
struct CellRecord {
    std::string dataset;
    std::int64_t s_min = 0;
    std::string test; // "fit" | "gof" | "vuong" | "zipf_lrt"
    Family family{};
    Estimator estimator{};
    std::optional<FitResult> fit;
    std::optional<GofReport> gof;
    std::optional<VuongReport> vuong;
    std::optional<LrtReport> lrt;
    std::string error;
};

struct SweepResult {
    std::vector<CellRecord> records;
    bool had_errors = false;
};

// Runs fit (+gof, +compare) over the (dataset, s_min) grid. Cells execute on
// a bounded worker pool; record order and all seeds depend only on the config,
// never on scheduling. Per-cell failures become error records and the run
// continues.
SweepResult run_cells(const RunConfig& config);

// Bootstrap seed for the gof record of fit combo `fit_index` in cell
// `cell_index`. Runs producing a single gof record use the master seed
// directly, so the seed stored in any record reproduces that record via a
// single-cell rerun.
std::uint64_t derive_cell_seed(std::uint64_t master_seed, std::size_t cell_index,
                               std::size_t fit_index);

} // namespace tailbin
