#pragma once

// Parameter-plane sweeps: classify every cell of a grid over alpha or beta.

#include "delaylog/cycle_detector.hpp"
#include "delaylog/map_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

enum class SweepTarget { Alpha, Beta };

std::string to_string(SweepTarget t);
SweepTarget parse_sweep_target(std::string_view text);

struct GridSpec {
    double re_min = -1.0, re_max = 1.0;
    int re_steps = 1;
    double im_min = -1.0, im_max = 1.0;
    int im_steps = 1;
    Complex fixed_other{1.0, 0.0};
    SweepTarget target = SweepTarget::Alpha;
    std::int64_t max_cells = 1'000'000;

    void validate() const;
    std::int64_t cell_count() const { return static_cast<std::int64_t>(re_steps) * im_steps; }
    /// Center of cell (i_re, i_im).
    Complex cell_center(int i_re, int i_im) const;
    MapParameters params_at(Complex cell) const;
};

struct SweepRecord {
    Complex cell;
    PointVerdict classification;
    std::optional<double> lambda_max;
    double agree_fraction = 0.0;

    friend bool operator==(SweepRecord const&, SweepRecord const&) = default;
};

/// Records are row-major: imaginary index outer, real index inner.
struct SweepResult {
    GridSpec grid;
    std::vector<SweepRecord> records;
};

struct SweepOptions {
    int n_seeds = 5;
    std::uint64_t rng_seed = 0;
    ClassifyBudgets budgets;
    unsigned workers = 1;
};

/// Cell k uses stream k of the counter-based generator, so the result does
/// not depend on the worker count. A cell whose classification throws is
/// recorded as Inconclusive.
SweepResult run_sweep(GridSpec const& grid, SweepOptions const& options);

} // namespace delaylog
