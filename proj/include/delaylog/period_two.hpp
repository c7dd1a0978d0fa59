#pragma once

// Closed-form prime-period-2 cycles and the Jacobian of the second iterate
// T^2(u, v) = (g, h), g = alpha*v/(1+beta*u), h = alpha*g/(1+beta*v).

#include "delaylog/linear_stability.hpp"
#include "delaylog/map_core.hpp"

#include <array>
#include <optional>
#include <string>

namespace delaylog {

/// Sign of the square root taken for (phi, psi).
enum class Branch { MinusPlus, PlusMinus };

std::string to_string(Branch b);

struct PeriodTwoCycle {
    Complex phi;
    Complex psi;
    Branch branch;
};

/// Both branches of the closed form, or nullopt when no prime period-2
/// cycle exists (vanishing discriminant, a point coinciding with an
/// equilibrium, or a point on the forbidden set). Throws DegenerateError
/// for beta == 0.
std::optional<std::array<PeriodTwoCycle, 2>>
period_two_cycles(MapParameters const& params, double guard_epsilon = kDefaultGuardEpsilon);

struct JacobianT2 {
    Complex g_u, g_v, h_u, h_v;
    Complex chi;        // trace
    Complex lambda_det; // determinant
    std::array<Complex, 2> eigenvalues;
};

JacobianT2 jacobian_t2(MapParameters const& params, PeriodTwoCycle const& cycle,
                       double guard_epsilon = kDefaultGuardEpsilon);

struct PeriodTwoStability {
    /// |chi| < 1 + |lambda_det| < 2
    bool modulus_test_stable;
    Stability eigen_classification;
    bool eigen_stable;
    bool agreement;
};

PeriodTwoStability period_two_stability(JacobianT2 const& jac,
                                        double tol_hyp = kDefaultHyperbolicTol);

} // namespace delaylog
