#include "delaylog/map_core.hpp"

#include "delaylog/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace delaylog {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

constexpr double kOverflowCeilingSq = kOverflowCeiling * kOverflowCeiling;

double flush_subnormal(double x) noexcept
{
    return std::abs(x) < std::numeric_limits<double>::min() ? 0.0 * x : x;
}

} // namespace

void OrbitSpec::validate() const
{
    if (n_iterations <= 0)
        throw InvalidInputError("n_iterations must be positive");
    if (transient < 0 || transient >= n_iterations)
        throw InvalidInputError("transient must lie in [0, n_iterations)");
    if (!(guard_epsilon > 0.0) || !std::isfinite(guard_epsilon))
        throw InvalidInputError("guard_epsilon must be a positive finite number");
    if (!finite(z_minus1) || !finite(z0))
        throw InvalidInputError("initial values must be finite");
    if (abs2(z_minus1) > kOverflowCeilingSq || abs2(z0) > kOverflowCeilingSq)
        throw InvalidInputError("initial values exceed the overflow ceiling");
}

std::string OrbitStatus::to_string() const
{
    switch (kind) {
    case OrbitStatusKind::Completed:
        return "Completed";
    case OrbitStatusKind::UndefinedAtStep:
        return "UndefinedAtStep(" + std::to_string(step) + ")";
    case OrbitStatusKind::OverflowAtStep:
        return "OverflowAtStep(" + std::to_string(step) + ")";
    }
    return "Completed";
}

OrbitStatus OrbitStatus::parse(std::string_view text)
{
    if (text == "Completed")
        return completed();
    auto parse_step = [&](std::string_view prefix) -> std::optional<std::int64_t> {
        if (text.size() < prefix.size() + 2 || text.substr(0, prefix.size()) != prefix ||
            text[prefix.size()] != '(' || text.back() != ')')
            return std::nullopt;
        auto digits = text.substr(prefix.size() + 1, text.size() - prefix.size() - 2);
        std::int64_t n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            return std::nullopt;
        return n;
    };
    if (auto n = parse_step("UndefinedAtStep"))
        return undefined_at(*n);
    if (auto n = parse_step("OverflowAtStep"))
        return overflow_at(*n);
    throw InvalidInputError("unknown orbit status: " + std::string(text));
}

StepResult try_step(MapParameters const& params, Complex z_curr, Complex z_prev,
                    double guard_epsilon) noexcept
{
    Complex const denom = 1.0 + params.beta * z_prev;
    if (!(abs2(denom) > guard_epsilon * guard_epsilon))
        return {StepOutcome::Undefined, {}};
    Complex const next = params.alpha * z_curr / denom;
    if (!finite(next) || abs2(next) > kOverflowCeilingSq)
        return {StepOutcome::Overflow, {}};
    // subnormal components can get stuck (the smallest subnormal times |alpha| < 1
    // rounds back to itself) and are very slow to compute with
    return {StepOutcome::Ok, {flush_subnormal(next.real()), flush_subnormal(next.imag())}};
}

Complex iterate_step(MapParameters const& params, Complex z_curr, Complex z_prev,
                     double guard_epsilon)
{
    if (!(guard_epsilon > 0.0))
        throw InvalidInputError("guard_epsilon must be positive");
    auto const r = try_step(params, z_curr, z_prev, guard_epsilon);
    switch (r.outcome) {
    case StepOutcome::Undefined:
        throw UndefinedError("denominator 1 + beta*z_prev within guard of zero");
    case StepOutcome::Overflow:
        throw OverflowError("iterate modulus exceeds overflow ceiling");
    case StepOutcome::Ok:
        break;
    }
    return r.value;
}

Orbit generate_orbit(MapParameters const& params, OrbitSpec const& spec)
{
    spec.validate();
    Orbit orbit;
    orbit.points.reserve(static_cast<std::size_t>(spec.n_iterations) + 2);
    orbit.points.push_back(spec.z_minus1);
    orbit.points.push_back(spec.z0);

    Complex prev = spec.z_minus1;
    Complex curr = spec.z0;
    for (std::int64_t n = 1; n <= spec.n_iterations; ++n) {
        auto const r = try_step(params, curr, prev, spec.guard_epsilon);
        if (r.outcome == StepOutcome::Undefined) {
            orbit.status = OrbitStatus::undefined_at(n);
            return orbit;
        }
        if (r.outcome == StepOutcome::Overflow) {
            orbit.status = OrbitStatus::overflow_at(n);
            return orbit;
        }
        orbit.points.push_back(r.value);
        prev = curr;
        curr = r.value;
    }
    orbit.status = OrbitStatus::completed();
    return orbit;
}

Equilibria equilibria(MapParameters const& params, double guard_epsilon)
{
    Equilibria eq;
    if (params.beta == Complex{0.0, 0.0})
        return eq;
    // 1 + beta*(alpha-1)/beta == alpha
    if (!(std::abs(params.alpha) > guard_epsilon))
        throw DegenerateError("nonzero equilibrium lies on the forbidden set (alpha ~ 0)");
    eq.nonzero = (params.alpha - 1.0) / params.beta;
    return eq;
}

TrapBall trap_ball_radius(MapParameters const& params)
{
    TrapBall ball;
    double const a = std::abs(params.alpha);
    double const b = std::abs(params.beta);
    ball.alpha_below_one = a < 1.0;
    ball.beta_below_one = b < 1.0;
    if (ball.alpha_below_one && b != 0.0)
        ball.radius = (1.0 - a) / b;
    return ball;
}

} // namespace delaylog
