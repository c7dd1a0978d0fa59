#include "delaylog/sweep.hpp"

#include "delaylog/errors.hpp"
#include "delaylog/parallel.hpp"

#include <cmath>

namespace delaylog {

std::string to_string(SweepTarget t)
{
    return t == SweepTarget::Alpha ? "alpha" : "beta";
}

SweepTarget parse_sweep_target(std::string_view text)
{
    if (text == "alpha" || text == "Alpha")
        return SweepTarget::Alpha;
    if (text == "beta" || text == "Beta")
        return SweepTarget::Beta;
    throw InvalidInputError("sweep target must be alpha or beta, got " + std::string(text));
}

void GridSpec::validate() const
{
    if (!(re_min < re_max) || !(im_min < im_max))
        throw InvalidInputError("grid needs re_min < re_max and im_min < im_max");
    if (!std::isfinite(re_min) || !std::isfinite(re_max) || !std::isfinite(im_min) || !std::isfinite(im_max))
        throw InvalidInputError("grid bounds must be finite");
    if (re_steps < 1 || im_steps < 1)
        throw InvalidInputError("grid step counts must be positive");
    if (cell_count() > max_cells)
        throw InvalidInputError("grid has " + std::to_string(cell_count()) + " cells, budget is " +
                                std::to_string(max_cells));
}

Complex GridSpec::cell_center(int i_re, int i_im) const
{
    double const re = re_min + (i_re + 0.5) * (re_max - re_min) / re_steps;
    double const im = im_min + (i_im + 0.5) * (im_max - im_min) / im_steps;
    return {re, im};
}

MapParameters GridSpec::params_at(Complex cell) const
{
    return target == SweepTarget::Alpha ? MapParameters{cell, fixed_other} : MapParameters{fixed_other, cell};
}

SweepResult run_sweep(GridSpec const& grid, SweepOptions const& options)
{
    grid.validate();
    if (options.n_seeds < 1)
        throw InvalidInputError("n_seeds must be >= 1");

    SweepResult result;
    result.grid = grid;
    auto const cells = static_cast<std::size_t>(grid.cell_count());
    result.records.resize(cells);

    parallel_for(cells, options.workers, [&](std::size_t k) {
        int const i_re = static_cast<int>(k % static_cast<std::size_t>(grid.re_steps));
        int const i_im = static_cast<int>(k / static_cast<std::size_t>(grid.re_steps));
        SweepRecord& rec = result.records[k];
        rec.cell = grid.cell_center(i_re, i_im);

        ClassifyOptions copt;
        copt.n_seeds = options.n_seeds;
        copt.rng_seed = options.rng_seed;
        copt.stream = k;
        copt.budgets = options.budgets;
        try {
            auto const cls = classify_parameter_point(grid.params_at(rec.cell), copt);
            rec.classification = cls.verdict;
            rec.lambda_max = cls.lambda_max;
            rec.agree_fraction = cls.agree_fraction;
        } catch (Error const&) {
            rec.classification = {VerdictKind::Inconclusive, 0};
        }
    });
    return result;
}

} // namespace delaylog
