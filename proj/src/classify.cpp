#include "delaylog/cycle_detector.hpp"
#include "delaylog/errors.hpp"
#include "delaylog/parallel.hpp"
#include "delaylog/rng.hpp"

#include <charconv>
#include <cmath>
#include <map>

namespace delaylog {

std::string to_string(VerdictKind k)
{
    switch (k) {
    case VerdictKind::ConvergentToEquilibrium:
        return "ConvergentToEquilibrium";
    case VerdictKind::Periodic:
        return "Periodic";
    case VerdictKind::Chaotic:
        return "Chaotic";
    case VerdictKind::Unbounded:
        return "Unbounded";
    case VerdictKind::Undefined:
        return "Undefined";
    case VerdictKind::Inconclusive:
        return "Inconclusive";
    }
    return "Inconclusive";
}

std::string PointVerdict::label() const
{
    if (kind == VerdictKind::Periodic)
        return "Periodic(" + std::to_string(period) + ")";
    return to_string(kind);
}

PointVerdict PointVerdict::parse(std::string_view text)
{
    for (auto k : {VerdictKind::ConvergentToEquilibrium, VerdictKind::Chaotic, VerdictKind::Unbounded,
                   VerdictKind::Undefined, VerdictKind::Inconclusive}) {
        if (text == to_string(k))
            return {k, 0};
    }
    std::string_view const prefix = "Periodic(";
    if (text.size() > prefix.size() + 1 && text.substr(0, prefix.size()) == prefix && text.back() == ')') {
        auto digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        int p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && p >= 1)
            return {VerdictKind::Periodic, p};
    }
    throw InvalidInputError("unknown verdict: " + std::string(text));
}

SeedOutcome classify_seed(MapParameters const& params, Complex z_minus1, Complex z0,
                          ClassifyBudgets const& budgets)
{
    if (budgets.iterations <= 0 || budgets.transient < 0)
        throw InvalidInputError("classification budgets must be positive");

    SeedOutcome out;
    out.z_minus1 = z_minus1;
    out.z0 = z0;

    OrbitSpec spec;
    spec.z_minus1 = z_minus1;
    spec.z0 = z0;
    spec.n_iterations = budgets.transient + budgets.iterations;
    spec.transient = budgets.transient;
    spec.guard_epsilon = budgets.guard_epsilon;
    Orbit const orbit = generate_orbit(params, spec);
    out.orbit_status = orbit.status.to_string();

    switch (orbit.status.kind) {
    case OrbitStatusKind::UndefinedAtStep:
        out.verdict = {VerdictKind::Undefined, 0};
        return out;
    case OrbitStatusKind::OverflowAtStep:
        out.verdict = {VerdictKind::Unbounded, 0};
        return out;
    case OrbitStatusKind::Completed:
        break;
    }

    LyapunovOptions lyap;
    lyap.keep_trace = false;
    lyap.chaos_tol = budgets.chaos_tol;
    try {
        double const lambda = lyapunov_along(params, orbit, budgets.transient, lyap, budgets.guard_epsilon).lambda_max;
        if (std::isfinite(lambda))
            out.lambda_max = lambda;
    } catch (DegenerateError const&) {
    }

    DetectOptions detect;
    detect.transient = budgets.transient;
    detect.p_max = budgets.p_max;
    detect.match_tol = budgets.match_tol;
    detect.window = budgets.window;
    auto const cycle = detect_cycle(orbit, detect);
    if (cycle.detected) {
        out.cycle_points = cycle.representative_points;
        out.verdict = cycle.period == 1 ? PointVerdict{VerdictKind::ConvergentToEquilibrium, 0}
                                        : PointVerdict{VerdictKind::Periodic, cycle.period};
    } else if (out.lambda_max && *out.lambda_max > budgets.chaos_tol) {
        out.verdict = {VerdictKind::Chaotic, 0};
    } else {
        out.verdict = {VerdictKind::Inconclusive, 0};
    }
    return out;
}

PointClassification classify_parameter_point(MapParameters const& params, ClassifyOptions const& options)
{
    if (options.n_seeds < 1)
        throw InvalidInputError("n_seeds must be >= 1");

    PointClassification result;
    auto const n = static_cast<std::size_t>(options.n_seeds);
    result.seeds.resize(n);
    parallel_for(n, options.workers, [&](std::size_t i) {
        CounterRng rng(options.rng_seed, options.stream, i);
        Complex const z_minus1 = rng.unit_disk();
        Complex const z0 = rng.unit_disk();
        result.seeds[i] = classify_seed(params, z_minus1, z0, options.budgets);
    });

    // plurality in seed order; ties go to the label seen first
    std::map<std::string, int> counts;
    std::vector<PointVerdict> order;
    double lambda_sum = 0.0;
    int lambda_count = 0;
    for (auto const& s : result.seeds) {
        if (counts[s.verdict.label()]++ == 0)
            order.push_back(s.verdict);
        if (s.lambda_max) {
            lambda_sum += *s.lambda_max;
            ++lambda_count;
        }
    }
    int best = 0;
    for (auto const& v : order) {
        int const c = counts[v.label()];
        if (c > best) {
            best = c;
            result.plurality = v;
        }
    }
    result.agree_fraction = static_cast<double>(best) / static_cast<double>(n);
    result.verdict = result.agree_fraction >= options.agreement_threshold ? result.plurality
                                                                         : PointVerdict{VerdictKind::Inconclusive, 0};
    if (lambda_count > 0)
        result.lambda_max = lambda_sum / lambda_count;
    return result;
}

} // namespace delaylog
