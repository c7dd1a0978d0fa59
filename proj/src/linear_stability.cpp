#include "delaylog/linear_stability.hpp"

#include "delaylog/errors.hpp"

#include <cmath>

namespace delaylog {

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::LocallyAsymptoticallyStable:
        return "LocallyAsymptoticallyStable";
    case Stability::Unstable:
        return "Unstable";
    case Stability::NonHyperbolic:
        return "NonHyperbolic";
    }
    return "Unstable";
}

Stability parse_stability(std::string_view text)
{
    if (text == "LocallyAsymptoticallyStable")
        return Stability::LocallyAsymptoticallyStable;
    if (text == "Unstable")
        return Stability::Unstable;
    if (text == "NonHyperbolic")
        return Stability::NonHyperbolic;
    throw InvalidInputError("unknown stability classification: " + std::string(text));
}

CharacteristicPoly char_poly_zero_eq(MapParameters const& params)
{
    return {-params.alpha, Complex{0.0, 0.0}};
}

CharacteristicPoly char_poly_nonzero_eq(MapParameters const& params)
{
    if (params.alpha == Complex{0.0, 0.0})
        throw DegenerateError("characteristic polynomial of (alpha-1)/beta needs alpha != 0");
    return {Complex{-1.0, 0.0}, (params.alpha - 1.0) / params.alpha};
}

std::array<Complex, 2> quadratic_roots(CharacteristicPoly const& poly)
{
    Complex const c1 = poly.c1;
    Complex const c0 = poly.c0;
    if (c0 == Complex{0.0, 0.0})
        return {-c1, Complex{0.0, 0.0}};

    Complex const root_disc = std::sqrt(c1 * c1 - 4.0 * c0);
    // pick the sign that adds magnitudes in c1 + s*sqrt(disc)
    double const align = (std::conj(c1) * root_disc).real();
    Complex const q = -0.5 * (align >= 0.0 ? c1 + root_disc : c1 - root_disc);
    if (q == Complex{0.0, 0.0})
        return {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    Complex r1 = q;
    Complex r2 = c0 / q;
    if (abs2(r2) > abs2(r1))
        std::swap(r1, r2);
    return {r1, r2};
}

Stability classify_moduli(std::array<double, 2> const& moduli, double tol_hyp)
{
    bool near_one = false;
    bool above = false;
    for (double m : moduli) {
        if (std::abs(m - 1.0) <= tol_hyp)
            near_one = true;
        else if (m > 1.0)
            above = true;
    }
    if (above)
        return Stability::Unstable;
    if (near_one)
        return Stability::NonHyperbolic;
    return Stability::LocallyAsymptoticallyStable;
}

StabilityReport classify(CharacteristicPoly const& poly, double tol_hyp, Complex equilibrium)
{
    if (!(tol_hyp > 0.0))
        throw InvalidInputError("tol_hyp must be positive");
    StabilityReport report;
    report.equilibrium = equilibrium;
    report.roots = quadratic_roots(poly);
    report.root_moduli = {std::abs(report.roots[0]), std::abs(report.roots[1])};
    report.classification = classify_moduli(report.root_moduli, tol_hyp);
    return report;
}

std::optional<Stability> z2_band_verdict(MapParameters const& params)
{
    double const a = std::abs(params.alpha);
    if (a == 0.0)
        throw DegenerateError("band rule needs alpha != 0");
    if (a < 1.0 / 3.0)
        return Stability::Unstable;
    if (a <= 4.0 / 3.0)
        return Stability::LocallyAsymptoticallyStable;
    return std::nullopt;
}

std::vector<StabilityReport> analyze_equilibria(MapParameters const& params, double tol_hyp,
                                                double guard_epsilon)
{
    std::vector<StabilityReport> reports;
    auto const eq = equilibria(params, guard_epsilon);
    reports.push_back(classify(char_poly_zero_eq(params), tol_hyp, eq.zero));
    if (eq.nonzero) {
        auto report = classify(char_poly_nonzero_eq(params), tol_hyp, *eq.nonzero);
        report.band_verdict = z2_band_verdict(params);
        report.agreement = !report.band_verdict || *report.band_verdict == report.classification;
        reports.push_back(report);
    }
    return reports;
}

} // namespace delaylog
