#pragma once

// Eventual-periodicity detection on generated orbits, Newton refinement of
// periodic points, and the per-parameter classification built on both.

#include "delaylog/lyapunov.hpp"
#include "delaylog/map_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

enum class CycleKind { ExactlyPeriodic, ConvergingToCycle, NoCycleFound };

std::string to_string(CycleKind k);
CycleKind parse_cycle_kind(std::string_view text);

struct DetectOptions {
    std::int64_t transient = 1000;
    int p_max = 2048;
    double match_tol = 1e-7;
    std::int64_t window = 0; // 0 selects 3 * p_max

    std::int64_t effective_window() const { return window > 0 ? window : 3 * static_cast<std::int64_t>(p_max); }
};

struct CycleReport {
    bool detected = false;
    int period = 0;
    std::vector<Complex> representative_points;
    double residual = 0.0;
    std::int64_t window_start = 0; // orbit index n of the first compared point
    CycleKind classification = CycleKind::NoCycleFound;
    /// Geometric-mean ratio of the per-period residual across the window.
    double contraction_per_period = 1.0;

    friend bool operator==(CycleReport const&, CycleReport const&) = default;
};

/// Finds the smallest p in [1, p_max] such that |z_{n+p} - z_n| < match_tol
/// holds for `window` consecutive n after the transient. The matching run is
/// extended as far as it goes; the verification window is its final
/// `window` comparisons.
///
/// Requires a completed orbit with at least 2*p_max + window points after
/// the transient (InsufficientDataError otherwise).
CycleReport detect_cycle(Orbit const& orbit, DetectOptions const& options);

struct RefineOptions {
    int p_max = 16;
    double capture_radius = 1e-3;
    int max_newton_steps = 60;
    double guard_epsilon = kDefaultGuardEpsilon;
};

struct PeriodicPoint {
    int period = 0;
    Complex z_prev;
    Complex z_curr;
    double residual = 0.0;
    double distance_from_seed = 0.0;
};

/// Newton iteration on F^p(x) = x for p = 1, 2, ... where F is the
/// one-step map on (z_prev, z_curr). Returns the first p whose limit lies
/// within capture_radius of the seed and is not fixed by a shorter divisor
/// iterate.
std::optional<PeriodicPoint> refine_periodic_point(MapParameters const& params, Complex z_prev,
                                                   Complex z_curr, RefineOptions const& options = {});

// ---------------------------------------------------------------------------

enum class VerdictKind { ConvergentToEquilibrium, Periodic, Chaotic, Unbounded, Undefined, Inconclusive };

struct PointVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    int period = 0; // set for Periodic only

    /// "Periodic(55)", "Chaotic", ...
    std::string label() const;
    static PointVerdict parse(std::string_view text);

    friend bool operator==(PointVerdict const&, PointVerdict const&) = default;
};

std::string to_string(VerdictKind k);

struct ClassifyBudgets {
    std::int64_t transient = 1000;
    std::int64_t iterations = 100000; // analysed steps after the transient
    int p_max = 2048;
    double match_tol = 1e-7;
    std::int64_t window = 0;
    double chaos_tol = kDefaultChaosTol;
    double guard_epsilon = kDefaultGuardEpsilon;
};

struct SeedOutcome {
    Complex z_minus1;
    Complex z0;
    PointVerdict verdict;
    std::optional<double> lambda_max;
    std::string orbit_status;
    std::vector<Complex> cycle_points; // representative points when a cycle was found
};

struct PointClassification {
    PointVerdict verdict;   // plurality when agree_fraction >= threshold, else Inconclusive
    PointVerdict plurality;
    double agree_fraction = 0.0;
    std::optional<double> lambda_max; // mean over seeds where it was computed
    std::vector<SeedOutcome> seeds;
};

struct ClassifyOptions {
    int n_seeds = 10;
    std::uint64_t rng_seed = 0;
    std::uint64_t stream = 0; // sweeps pass the cell index
    ClassifyBudgets budgets;
    double agreement_threshold = 0.8;
    unsigned workers = 1;
};

/// Classifies one initial pair.
SeedOutcome classify_seed(MapParameters const& params, Complex z_minus1, Complex z0,
                          ClassifyBudgets const& budgets);

/// Draws n_seeds initial pairs from the unit disk (counter-based from
/// rng_seed, stream and seed index) and aggregates the per-seed verdicts in
/// seed order.
PointClassification classify_parameter_point(MapParameters const& params, ClassifyOptions const& options);

} // namespace delaylog
