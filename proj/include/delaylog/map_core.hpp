#pragma once

// Delay logistic map z_{n+1} = alpha*z_n / (1 + beta*z_{n-1}) over the
// complex numbers: single steps, guarded orbits, equilibria and the
// trap-ball radius.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

using Complex = std::complex<double>;

inline constexpr double kDefaultGuardEpsilon = 1e-12;
inline constexpr double kOverflowCeiling = 1e150;

/// Squared modulus without the hypot() detour std::norm takes.
inline double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

struct MapParameters {
    Complex alpha;
    Complex beta;

    friend bool operator==(MapParameters const&, MapParameters const&) = default;
};

struct OrbitSpec {
    Complex z_minus1;
    Complex z0;
    std::int64_t n_iterations = 1000;
    std::int64_t transient = 0;
    double guard_epsilon = kDefaultGuardEpsilon;

    /// Throws InvalidInputError when an invariant is broken.
    void validate() const;
};

enum class OrbitStatusKind { Completed, UndefinedAtStep, OverflowAtStep };

struct OrbitStatus {
    OrbitStatusKind kind = OrbitStatusKind::Completed;
    std::int64_t step = 0; // meaningful for the two failure kinds

    static OrbitStatus completed() { return {}; }
    static OrbitStatus undefined_at(std::int64_t n) { return {OrbitStatusKind::UndefinedAtStep, n}; }
    static OrbitStatus overflow_at(std::int64_t n) { return {OrbitStatusKind::OverflowAtStep, n}; }

    bool ok() const { return kind == OrbitStatusKind::Completed; }

    /// "Completed", "UndefinedAtStep(n)" or "OverflowAtStep(n)".
    std::string to_string() const;
    static OrbitStatus parse(std::string_view text);

    friend bool operator==(OrbitStatus const&, OrbitStatus const&) = default;
};

/// points[k] holds z_{k-1}: the first two entries are z_{-1} and z_0.
struct Orbit {
    std::vector<Complex> points;
    OrbitStatus status;

    Complex at(std::int64_t n) const { return points.at(static_cast<std::size_t>(n + 1)); }
    std::int64_t first_index() const { return -1; }
    std::int64_t last_index() const { return static_cast<std::int64_t>(points.size()) - 2; }

    friend bool operator==(Orbit const&, Orbit const&) = default;
};

enum class StepOutcome { Ok, Undefined, Overflow };

struct StepResult {
    StepOutcome outcome;
    Complex value;
};

/// Non-throwing step used by the orbit loops.
StepResult try_step(MapParameters const& params, Complex z_curr, Complex z_prev,
                    double guard_epsilon = kDefaultGuardEpsilon) noexcept;

/// alpha*z_curr/(1 + beta*z_prev). Throws UndefinedError near the forbidden
/// set and OverflowError above the overflow ceiling.
Complex iterate_step(MapParameters const& params, Complex z_curr, Complex z_prev,
                     double guard_epsilon = kDefaultGuardEpsilon);

/// Iterates spec.n_iterations times. Termination is reported through
/// Orbit::status; the points up to the failing step are kept.
Orbit generate_orbit(MapParameters const& params, OrbitSpec const& spec);

struct Equilibria {
    Complex zero{0.0, 0.0};
    std::optional<Complex> nonzero; // (alpha - 1)/beta, absent when beta == 0
};

/// Throws DegenerateError when (alpha-1)/beta sits on the forbidden set,
/// i.e. |1 + beta*z| = |alpha| <= guard_epsilon.
Equilibria equilibria(MapParameters const& params, double guard_epsilon = kDefaultGuardEpsilon);

struct TrapBall {
    std::optional<double> radius; // (1 - |alpha|)/|beta|
    bool alpha_below_one = false;
    bool beta_below_one = false;
};

TrapBall trap_ball_radius(MapParameters const& params);

} // namespace delaylog
