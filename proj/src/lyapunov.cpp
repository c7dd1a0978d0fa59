#include "delaylog/lyapunov.hpp"

#include "delaylog/errors.hpp"

#include <cmath>
#include <limits>

namespace delaylog {

Jacobian2 tangent_jacobian(MapParameters const& params, Complex z_curr, Complex z_prev,
                           double guard_epsilon)
{
    Complex const d = 1.0 + params.beta * z_prev;
    if (!(std::abs(d) > guard_epsilon))
        throw DegenerateError("tangent map undefined near the forbidden set");
    Jacobian2 j{};
    j[0] = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    j[1] = {-params.alpha * params.beta * z_curr / (d * d), params.alpha / d};
    return j;
}

std::string to_string(ChaosVerdict v)
{
    switch (v) {
    case ChaosVerdict::Chaotic:
        return "Chaotic";
    case ChaosVerdict::NonChaotic:
        return "NonChaotic";
    case ChaosVerdict::Inconclusive:
        return "Inconclusive";
    }
    return "Inconclusive";
}

ChaosVerdict parse_chaos_verdict(std::string_view text)
{
    if (text == "Chaotic")
        return ChaosVerdict::Chaotic;
    if (text == "NonChaotic")
        return ChaosVerdict::NonChaotic;
    if (text == "Inconclusive")
        return ChaosVerdict::Inconclusive;
    throw InvalidInputError("unknown chaos verdict: " + std::string(text));
}

ChaosVerdict chaos_verdict(double lambda_max, double chaos_tol)
{
    if (lambda_max > chaos_tol)
        return ChaosVerdict::Chaotic;
    if (lambda_max < -chaos_tol)
        return ChaosVerdict::NonChaotic;
    return ChaosVerdict::Inconclusive;
}

LyapunovReport lyapunov_along(MapParameters const& params, Orbit const& orbit, std::int64_t start,
                              LyapunovOptions const& options, double guard_epsilon)
{
    if (options.renorm_interval < 1)
        throw InvalidInputError("renorm_interval must be >= 1");
    if (start < 0 || start >= orbit.last_index())
        throw InsufficientDataError("no steps available after the requested start index");

    double const n0 = std::sqrt(abs2(options.initial_tangent[0]) + abs2(options.initial_tangent[1]));
    if (!(n0 > 0.0) || !std::isfinite(n0))
        throw InvalidInputError("initial tangent vector must be nonzero and finite");
    Complex t_u = options.initial_tangent[0] / n0;
    Complex t_v = options.initial_tangent[1] / n0;

    LyapunovReport report;
    report.renorm_interval = options.renorm_interval;
    auto const& pts = orbit.points;
    std::size_t const first = static_cast<std::size_t>(start + 1); // index of z_start
    std::size_t const steps = pts.size() - 1 - first;
    if (options.keep_trace)
        report.running_estimates.reserve(steps / static_cast<std::size_t>(options.renorm_interval) + 1);

    Complex const ab = params.alpha * params.beta;
    double log_sum = 0.0;
    double max_mod2 = 0.0;
    bool collapsed = false;
    std::int64_t since_renorm = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        Complex const u = pts[first + k - 1];
        Complex const v = pts[first + k];
        max_mod2 = std::max(max_mod2, abs2(v));
        Complex const d = 1.0 + params.beta * u;
        if (!(abs2(d) > guard_epsilon * guard_epsilon))
            throw DegenerateError("orbit passes within guard of the forbidden set");
        Complex const next_u = t_v;
        Complex const next_v = -ab * v / (d * d) * t_u + params.alpha / d * t_v;
        t_u = next_u;
        t_v = next_v;
        ++since_renorm;

        bool const last = k + 1 == steps;
        if (since_renorm == options.renorm_interval || last) {
            double const norm = std::sqrt(abs2(t_u) + abs2(t_v));
            if (!(norm > 0.0)) {
                collapsed = true;
                report.n_used = static_cast<std::int64_t>(k + 1);
                break;
            }
            log_sum += std::log(norm);
            t_u /= norm;
            t_v /= norm;
            since_renorm = 0;
            if (options.keep_trace)
                report.running_estimates.push_back(log_sum / static_cast<double>(k + 1));
        }
        report.n_used = static_cast<std::int64_t>(k + 1);
    }
    max_mod2 = std::max(max_mod2, abs2(pts.back()));
    report.max_modulus = std::sqrt(max_mod2);

    if (collapsed) {
        // nilpotent product of Jacobians: every direction contracts to zero
        report.lambda_max = -std::numeric_limits<double>::infinity();
        if (options.keep_trace)
            report.running_estimates.push_back(report.lambda_max);
    } else {
        report.lambda_max = log_sum / static_cast<double>(report.n_used);
    }
    report.verdict = chaos_verdict(report.lambda_max, options.chaos_tol);
    return report;
}

LyapunovReport largest_lyapunov(MapParameters const& params, OrbitSpec const& spec,
                                LyapunovOptions const& options)
{
    spec.validate();
    if (spec.n_iterations - spec.transient < options.min_steps)
        throw InsufficientDataError("need at least " + std::to_string(options.min_steps) +
                                " post-transient steps");
    Orbit const orbit = generate_orbit(params, spec);
    if (!orbit.status.ok())
        throw OrbitTerminatedError("orbit terminated early: " + orbit.status.to_string());
    return lyapunov_along(params, orbit, spec.transient, options, spec.guard_epsilon);
}

} // namespace delaylog
