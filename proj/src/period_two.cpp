#include "delaylog/period_two.hpp"

#include "delaylog/errors.hpp"

#include <cmath>

namespace delaylog {

namespace {

constexpr double kCoincidenceTol = 1e-12;

bool close(Complex a, Complex b)
{
    return std::abs(a - b) <= kCoincidenceTol * (1.0 + std::abs(a) + std::abs(b));
}

} // namespace

std::string to_string(Branch b)
{
    return b == Branch::MinusPlus ? "MinusPlus" : "PlusMinus";
}

std::optional<std::array<PeriodTwoCycle, 2>>
period_two_cycles(MapParameters const& params, double guard_epsilon)
{
    Complex const a = params.alpha;
    Complex const b = params.beta;
    if (b == Complex{0.0, 0.0})
        throw DegenerateError("period-2 closed form needs beta != 0");

    Complex const b2 = b * b;
    Complex const root = std::sqrt((1.0 + (-2.0 - 3.0 * a) * a) * b2);
    Complex const base = (-0.5 - 0.5 * a) * b;
    Complex const minus = (base - 0.5 * root) / b2;
    Complex const plus = (base + 0.5 * root) / b2;

    if (close(minus, plus))
        return std::nullopt;
    Complex const zero{0.0, 0.0};
    Complex const z2 = (a - 1.0) / b;
    for (Complex p : {minus, plus}) {
        if (close(p, zero) || close(p, z2))
            return std::nullopt;
        if (!(std::abs(1.0 + b * p) > guard_epsilon))
            return std::nullopt;
    }
    return std::array<PeriodTwoCycle, 2>{PeriodTwoCycle{minus, plus, Branch::MinusPlus},
                                         PeriodTwoCycle{plus, minus, Branch::PlusMinus}};
}

JacobianT2 jacobian_t2(MapParameters const& params, PeriodTwoCycle const& cycle,
                       double guard_epsilon)
{
    Complex const a = params.alpha;
    Complex const b = params.beta;
    Complex const du = 1.0 + b * cycle.phi; // 1 + beta*u
    Complex const dv = 1.0 + b * cycle.psi; // 1 + beta*v
    if (!(std::abs(du) > guard_epsilon) || !(std::abs(dv) > guard_epsilon))
        throw DegenerateError("period-2 point on the forbidden set");

    Complex const v = cycle.psi;
    Complex const a2 = a * a;
    JacobianT2 jac;
    jac.g_u = -a * b * v / (du * du);
    jac.g_v = a / du;
    jac.h_u = -a2 * b * v / (du * du * dv);
    jac.h_v = -a2 * b * v / (du * dv * dv) + a2 / (du * dv);
    jac.chi = jac.g_u + jac.h_v;
    jac.lambda_det = jac.g_u * jac.h_v - jac.g_v * jac.h_u;
    jac.eigenvalues = quadratic_roots({-jac.chi, jac.lambda_det});
    return jac;
}

PeriodTwoStability period_two_stability(JacobianT2 const& jac, double tol_hyp)
{
    PeriodTwoStability s;
    double const bound = 1.0 + std::abs(jac.lambda_det);
    s.modulus_test_stable = std::abs(jac.chi) < bound && bound < 2.0;
    s.eigen_classification = classify_moduli(
        {std::abs(jac.eigenvalues[0]), std::abs(jac.eigenvalues[1])}, tol_hyp);
    s.eigen_stable = s.eigen_classification == Stability::LocallyAsymptoticallyStable;
    s.agreement = s.modulus_test_stable == s.eigen_stable;
    return s;
}

} // namespace delaylog
