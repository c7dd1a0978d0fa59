#include "delaylog/cycle_detector.hpp"

#include "delaylog/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace delaylog {

std::string to_string(CycleKind k)
{
    switch (k) {
    case CycleKind::ExactlyPeriodic:
        return "ExactlyPeriodic";
    case CycleKind::ConvergingToCycle:
        return "ConvergingToCycle";
    case CycleKind::NoCycleFound:
        return "NoCycleFound";
    }
    return "NoCycleFound";
}

CycleKind parse_cycle_kind(std::string_view text)
{
    if (text == "ExactlyPeriodic")
        return CycleKind::ExactlyPeriodic;
    if (text == "ConvergingToCycle")
        return CycleKind::ConvergingToCycle;
    if (text == "NoCycleFound")
        return CycleKind::NoCycleFound;
    throw InvalidInputError("unknown cycle classification: " + std::string(text));
}

namespace {

double max_gap(std::vector<Complex> const& pts, std::size_t begin, std::size_t end, std::size_t lag)
{
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i)
        worst = std::max(worst, abs2(pts[i + lag] - pts[i]));
    return std::sqrt(worst);
}

} // namespace

CycleReport detect_cycle(Orbit const& orbit, DetectOptions const& options)
{
    if (!orbit.status.ok())
        throw InvalidInputError("cycle detection needs a completed orbit, got " + orbit.status.to_string());
    if (options.p_max < 1)
        throw InvalidInputError("p_max must be >= 1");
    if (options.transient < 0)
        throw InvalidInputError("transient must be non-negative");
    if (!(options.match_tol > 0.0))
        throw InvalidInputError("match_tol must be positive");

    auto const& pts = orbit.points;
    auto const p_max = static_cast<std::size_t>(options.p_max);
    auto const window = static_cast<std::size_t>(options.effective_window());
    std::size_t const s0 = static_cast<std::size_t>(options.transient) + 1; // z_transient
    std::size_t const available = pts.size() > s0 ? pts.size() - s0 : 0;
    if (available < 2 * p_max + window)
        throw InsufficientDataError("orbit has " + std::to_string(available) +
                                    " post-transient points, need " + std::to_string(2 * p_max + window));

    double const tol2 = options.match_tol * options.match_tol;
    std::size_t const n = pts.size();

    for (std::size_t p = 1; p <= p_max; ++p) {
        std::size_t const last = n - p; // comparisons i in [s0, last)
        std::size_t run = 0;
        std::size_t i = s0;
        bool found = false;
        for (; i < last; ++i) {
            if (abs2(pts[i + p] - pts[i]) < tol2) {
                if (++run == window) {
                    found = true;
                    ++i;
                    break;
                }
            } else {
                run = 0;
            }
        }
        if (!found)
            continue;

        std::size_t end = i;
        while (end < last && abs2(pts[end + p] - pts[end]) < tol2)
            ++end;
        std::size_t const begin = end - window;

        for (std::size_t d = 1; d < p; ++d) {
            if (p % d == 0 && max_gap(pts, begin, end, d) < options.match_tol)
                throw std::logic_error("cycle detector: divisor period matched on verification window");
        }

        CycleReport report;
        report.detected = true;
        report.period = static_cast<int>(p);
        report.residual = max_gap(pts, begin, end, p);
        report.window_start = static_cast<std::int64_t>(begin) - 1;
        report.representative_points.assign(pts.begin() + static_cast<std::ptrdiff_t>(begin),
                                            pts.begin() + static_cast<std::ptrdiff_t>(begin + p));

        double scale = 1.0;
        for (auto z : report.representative_points)
            scale = std::max(scale, std::abs(z));
        double const exact_floor = 100.0 * std::numeric_limits<double>::epsilon() * scale;

        if (window >= 2 * p) {
            double const first = max_gap(pts, begin, begin + p, p);
            double const final = max_gap(pts, end - p, end, p);
            double const periods = static_cast<double>(window - p) / static_cast<double>(p);
            if (first > 0.0)
                report.contraction_per_period = std::pow(final / first, 1.0 / periods);
            else
                report.contraction_per_period = final > 0.0 ? std::numeric_limits<double>::max() : 1.0;
        }

        if (report.residual <= exact_floor)
            report.classification = CycleKind::ExactlyPeriodic;
        else if (report.contraction_per_period <= 1.0 - 1e-3)
            report.classification = CycleKind::ConvergingToCycle;
        else
            report.classification = CycleKind::ExactlyPeriodic;
        return report;
    }

    // Nothing matched: report the best final-window residual over all lags.
    CycleReport report;
    std::size_t const begin = n - p_max - window;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= p_max; ++p) {
        double worst = 0.0;
        for (std::size_t i = begin; i < begin + window; ++i) {
            worst = std::max(worst, abs2(pts[i + p] - pts[i]));
            if (worst >= best)
                break;
        }
        best = std::min(best, worst);
    }
    report.residual = std::sqrt(best);
    report.window_start = static_cast<std::int64_t>(begin) - 1;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

struct IterateResult {
    Complex u, v;
    std::array<Complex, 4> jac; // row-major
};

std::optional<IterateResult> iterate_with_jacobian(MapParameters const& params, Complex u, Complex v,
                                                   int p, double guard)
{
    // d(u', v')/d(u, v) for one step is [[0, 1], [j21, j22]]
    std::array<Complex, 4> m{Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    for (int k = 0; k < p; ++k) {
        Complex const d = 1.0 + params.beta * u;
        if (!(std::abs(d) > guard))
            return std::nullopt;
        Complex const j21 = -params.alpha * params.beta * v / (d * d);
        Complex const j22 = params.alpha / d;
        std::array<Complex, 4> const next{m[2], m[3], j21 * m[0] + j22 * m[2], j21 * m[1] + j22 * m[3]};
        m = next;
        Complex const w = params.alpha * v / d;
        u = v;
        v = w;
        if (!std::isfinite(abs2(v)) || abs2(v) > kOverflowCeiling * kOverflowCeiling)
            return std::nullopt;
    }
    return IterateResult{u, v, m};
}

} // namespace

std::optional<PeriodicPoint> refine_periodic_point(MapParameters const& params, Complex z_prev,
                                                   Complex z_curr, RefineOptions const& options)
{
    if (options.p_max < 1)
        throw InvalidInputError("p_max must be >= 1");

    for (int p = 1; p <= options.p_max; ++p) {
        Complex u = z_prev;
        Complex v = z_curr;
        bool ok = false;
        for (int step = 0; step < options.max_newton_steps; ++step) {
            auto const it = iterate_with_jacobian(params, u, v, p, options.guard_epsilon);
            if (!it)
                break;
            Complex const ru = it->u - u;
            Complex const rv = it->v - v;
            Complex const a = it->jac[0] - 1.0;
            Complex const b = it->jac[1];
            Complex const c = it->jac[2];
            Complex const d = it->jac[3] - 1.0;
            Complex const det = a * d - b * c;
            if (det == Complex{0.0, 0.0})
                break;
            Complex const du = -(d * ru - b * rv) / det;
            Complex const dv = -(-c * ru + a * rv) / det;
            u += du;
            v += dv;
            double const scale = 1.0 + std::abs(u) + std::abs(v);
            if (!std::isfinite(scale))
                break;
            if (std::abs(du) + std::abs(dv) <= 1e-15 * scale) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            // Newton may stall at round-off without meeting the step test
            auto const it = iterate_with_jacobian(params, u, v, p, options.guard_epsilon);
            ok = it && std::abs(it->u - u) + std::abs(it->v - v) <= 1e-10 * (1.0 + std::abs(u) + std::abs(v));
        }
        if (!ok)
            continue;

        auto const fin = iterate_with_jacobian(params, u, v, p, options.guard_epsilon);
        if (!fin)
            continue;
        double const scale = 1.0 + std::abs(u) + std::abs(v);
        double const residual = std::abs(fin->u - u) + std::abs(fin->v - v);
        if (residual > 1e-10 * scale)
            continue;
        double const dist = std::max(std::abs(u - z_prev), std::abs(v - z_curr));
        if (dist > options.capture_radius)
            continue;
        bool shorter = false;
        for (int d = 1; d < p && !shorter; ++d) {
            if (p % d != 0)
                continue;
            auto const sub = iterate_with_jacobian(params, u, v, d, options.guard_epsilon);
            shorter = sub && std::abs(sub->u - u) + std::abs(sub->v - v) <= 1e-8 * scale;
        }
        if (shorter)
            continue;
        return PeriodicPoint{p, u, v, residual, dist};
    }
    return std::nullopt;
}

} // namespace delaylog
