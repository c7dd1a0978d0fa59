#pragma once

// Largest Lyapunov exponent by propagating a tangent vector through the
// analytic one-step Jacobian of (u, v) -> (v, alpha*v/(1+beta*u)).

#include "delaylog/map_core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

inline constexpr double kDefaultChaosTol = 1e-3;

/// Row-major 2x2 complex matrix.
using Jacobian2 = std::array<std::array<Complex, 2>, 2>;

/// [[0, 1], [-alpha*beta*v/(1+beta*u)^2, alpha/(1+beta*u)]] with
/// u = z_prev, v = z_curr. Throws DegenerateError near the forbidden set.
Jacobian2 tangent_jacobian(MapParameters const& params, Complex z_curr, Complex z_prev,
                           double guard_epsilon = kDefaultGuardEpsilon);

enum class ChaosVerdict { Chaotic, NonChaotic, Inconclusive };

std::string to_string(ChaosVerdict v);
ChaosVerdict parse_chaos_verdict(std::string_view text);

struct LyapunovOptions {
    std::int64_t renorm_interval = 1;
    double chaos_tol = kDefaultChaosTol;
    /// Need not be normalised; only its direction matters.
    std::array<Complex, 2> initial_tangent{Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    bool keep_trace = true;
    /// largest_lyapunov refuses shorter post-transient spans.
    std::int64_t min_steps = 10000;
};

struct LyapunovReport {
    double lambda_max = 0.0; // nats per iteration
    std::int64_t n_used = 0;
    std::int64_t renorm_interval = 1;
    std::vector<double> running_estimates;
    ChaosVerdict verdict = ChaosVerdict::Inconclusive;
    double max_modulus = 0.0; // over the analysed points

    friend bool operator==(LyapunovReport const&, LyapunovReport const&) = default;
};

ChaosVerdict chaos_verdict(double lambda_max, double chaos_tol);

/// Tangent propagation along an existing orbit, starting at orbit index
/// n = start (so the first step consumed produces z_{start+1}).
LyapunovReport lyapunov_along(MapParameters const& params, Orbit const& orbit, std::int64_t start,
                              LyapunovOptions const& options = {},
                              double guard_epsilon = kDefaultGuardEpsilon);

/// Generates the orbit for `spec` and accumulates from index spec.transient.
/// Throws OrbitTerminatedError if the orbit does not complete.
LyapunovReport largest_lyapunov(MapParameters const& params, OrbitSpec const& spec,
                                LyapunovOptions const& options = {});

} // namespace delaylog
