#pragma once

// Local stability of the two equilibria from the roots of the monic
// characteristic polynomial lambda^2 + c1*lambda + c0.

#include "delaylog/map_core.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

inline constexpr double kDefaultHyperbolicTol = 1e-9;

struct CharacteristicPoly {
    Complex c1;
    Complex c0;
};

enum class Stability { LocallyAsymptoticallyStable, Unstable, NonHyperbolic };

std::string to_string(Stability s);
Stability parse_stability(std::string_view text);

struct StabilityReport {
    Complex equilibrium;
    std::array<Complex, 2> roots;
    std::array<double, 2> root_moduli;
    Stability classification;
    /// Verdict of the |alpha| band rule for the nonzero equilibrium, when it
    /// says anything for this alpha.
    std::optional<Stability> band_verdict;
    bool agreement = true;
};

/// lambda^2 - alpha*lambda, the zero equilibrium.
CharacteristicPoly char_poly_zero_eq(MapParameters const& params);

/// lambda^2 - lambda + (alpha-1)/alpha. Throws DegenerateError for alpha == 0.
CharacteristicPoly char_poly_nonzero_eq(MapParameters const& params);

/// Roots of the monic quadratic, larger modulus first. Uses the
/// cancellation-free form q = -(c1 + s*sqrt(c1^2 - 4c0))/2, root2 = c0/q.
std::array<Complex, 2> quadratic_roots(CharacteristicPoly const& poly);

Stability classify_moduli(std::array<double, 2> const& moduli, double tol_hyp);

StabilityReport classify(CharacteristicPoly const& poly, double tol_hyp = kDefaultHyperbolicTol,
                         Complex equilibrium = {});

/// The |alpha| band rule for (alpha-1)/beta: stable for 1/3 <= |alpha| <= 4/3,
/// unstable for 0 < |alpha| < 1/3, no verdict above 4/3.
std::optional<Stability> z2_band_verdict(MapParameters const& params);

/// One report per equilibrium; the nonzero one carries the band verdict.
std::vector<StabilityReport> analyze_equilibria(MapParameters const& params,
                                                double tol_hyp = kDefaultHyperbolicTol,
                                                double guard_epsilon = kDefaultGuardEpsilon);

} // namespace delaylog
