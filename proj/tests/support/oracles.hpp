#pragma once

// Test-only reference machinery, deliberately independent of the library's
// analytic derivatives: everything here works on the realified map
// R^4 -> R^4 and differentiates by central differences.

#include "delaylog/map_core.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using delaylog::Complex;
using delaylog::MapParameters;
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline Vec4 realify(Complex u, Complex v) { return {u.real(), u.imag(), v.real(), v.imag()}; }

/// One step of (u, v) -> (v, alpha*v/(1+beta*u)) written out in real arithmetic.
inline Vec4 step_real(MapParameters const& p, Vec4 const& x)
{
    double const ar = p.alpha.real(), ai = p.alpha.imag();
    double const br = p.beta.real(), bi = p.beta.imag();
    double const ur = x[0], ui = x[1], vr = x[2], vi = x[3];
    double const dr = 1.0 + br * ur - bi * ui;
    double const di = br * ui + bi * ur;
    double const nr = ar * vr - ai * vi;
    double const ni = ar * vi + ai * vr;
    double const den = dr * dr + di * di;
    return {vr, vi, (nr * dr + ni * di) / den, (ni * dr - nr * di) / den};
}

inline Vec4 iterate_real(MapParameters const& p, Vec4 x, int k)
{
    for (int i = 0; i < k; ++i)
        x = step_real(p, x);
    return x;
}

/// Central-difference Jacobian of x -> F^k(x), column j = d/dx_j.
inline Mat4 fd_jacobian(MapParameters const& p, Vec4 const& x, int k, double h = 1e-6)
{
    Mat4 jac{};
    for (int j = 0; j < 4; ++j) {
        Vec4 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Vec4 const fp = iterate_real(p, xp, k);
        Vec4 const fm = iterate_real(p, xm, k);
        for (int i = 0; i < 4; ++i)
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    }
    return jac;
}

/// Real 2x2 block [[a, -b], [b, a]] of a complex derivative a+bi.
inline void put_block(Mat4& m, int row, int col, Complex d)
{
    m[row][col] = d.real();
    m[row][col + 1] = -d.imag();
    m[row + 1][col] = d.imag();
    m[row + 1][col + 1] = d.real();
}

/// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vec4> solve4(Mat4 a, Vec4 b)
{
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c]))
                piv = r;
        if (std::abs(a[piv][c]) < 1e-300)
            return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 4; ++r) {
            double const f = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k)
                a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    Vec4 x{};
    for (int r = 3; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 4; ++k)
            s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

inline double norm4(Vec4 const& x)
{
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
}

/// Newton on F^k(x) - x = 0 with a finite-difference Jacobian. Known roots
/// listed in `deflate` are divided out (deflated Newton: the residual is
/// scaled by prod(1 + 1/|x - r|^2)) so the iteration is pushed toward other
/// roots. Returns the root when the undeflated residual drops below 1e-13
/// relative.
inline std::optional<Vec4> newton_fixed_point(MapParameters const& p, Vec4 x, int k,
                                              std::vector<Vec4> const& deflate = {}, int max_steps = 100)
{
    auto raw = [&](Vec4 const& y) {
        Vec4 const fy = iterate_real(p, y, k);
        return Vec4{fy[0] - y[0], fy[1] - y[1], fy[2] - y[2], fy[3] - y[3]};
    };
    auto deflated = [&](Vec4 const& y) {
        Vec4 r = raw(y);
        double m = 1.0;
        for (auto const& root : deflate) {
            Vec4 const d{y[0] - root[0], y[1] - root[1], y[2] - root[2], y[3] - root[3]};
            double const d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
            m *= 1.0 + 1.0 / d2;
        }
        for (auto& v : r)
            v *= m;
        return r;
    };
    for (int it = 0; it < max_steps; ++it) {
        double const scale = 1.0 + norm4(x);
        if (!std::isfinite(scale) || scale > 1e8)
            return std::nullopt;
        if (norm4(raw(x)) < 1e-13 * scale)
            return x;
        double const h = 1e-7 * scale;
        Vec4 const r = deflated(x);
        Mat4 m{};
        for (int j = 0; j < 4; ++j) {
            Vec4 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Vec4 const rp = deflated(xp);
            Vec4 const rm = deflated(xm);
            for (int i = 0; i < 4; ++i)
                m[i][j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        auto const dx = solve4(m, {-r[0], -r[1], -r[2], -r[3]});
        if (!dx)
            return std::nullopt;
        for (int i = 0; i < 4; ++i)
            x[i] += (*dx)[i];
    }
    if (norm4(raw(x)) < 1e-11 * (1.0 + norm4(x)))
        return x;
    return std::nullopt;
}

inline Complex random_complex(std::mt19937_64& g, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(g), u(g)};
}

inline Complex random_in_disk(std::mt19937_64& g, double radius)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double const r = radius * std::sqrt(u(g));
    double const t = 2.0 * 3.14159265358979323846 * u(g);
    return std::polar(r, t);
}

} // namespace oracle
