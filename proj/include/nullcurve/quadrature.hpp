#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <vector>

#include "nullcurve/errors.hpp"

namespace nullcurve {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth)
{
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw Error(ErrorCode::QuadratureError, "integrand evaluated to a non-finite value");
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw Error(ErrorCode::QuadratureError, "adaptive quadrature did not converge");
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
         + adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to the given absolute tolerance.
template <typename F>
double adaptive_quadrature(const F& f, double a, double b, double abs_tol = 1e-10)
{
    if (a == b)
        return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw Error(ErrorCode::QuadratureError, "integrand evaluated to a non-finite value");
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

namespace detail {

/// Snaps arguments a rounding error past the table ends back onto them.
inline double clamp_to_grid(const std::vector<double>& xs, double x)
{
    const double slack = 1e-9 * std::max(1.0, xs.back() - xs.front());
    if (x < xs.front() && x >= xs.front() - slack)
        return xs.front();
    if (x > xs.back() && x <= xs.back() + slack)
        return xs.back();
    return x;
}

/// Piecewise-linear interpolation on a strictly increasing grid.
inline double linear_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    x = clamp_to_grid(xs, x);
    if (x < xs.front() || x > xs.back())
        throw Error(ErrorCode::DomainError, "interpolation argument outside the tabulated range");
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t hi = static_cast<size_t>(std::distance(xs.begin(), it));
    if (hi == 0) ++hi;
    if (hi == xs.size()) --hi;
    const size_t lo = hi - 1;
    const double u = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + u * (ys[hi] - ys[lo]);
}

/// Cubic Lagrange interpolation through the four nodes nearest to x.
inline double lagrange4(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    const size_t n = xs.size();
    if (n < 4)
        return linear_interp(xs, ys, x);
    x = clamp_to_grid(xs, x);
    if (x < xs.front() || x > xs.back())
        throw Error(ErrorCode::DomainError, "interpolation argument outside the tabulated range");
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t hi = static_cast<size_t>(std::distance(xs.begin(), it));
    size_t j0 = (hi >= 2) ? hi - 2 : 0;
    j0 = std::min(j0, n - 4);
    double acc = 0.0;
    for (size_t j = j0; j < j0 + 4; ++j) {
        double term = ys[j];
        for (size_t k = j0; k < j0 + 4; ++k)
            if (k != j)
                term *= (x - xs[k]) / (xs[j] - xs[k]);
        acc += term;
    }
    return acc;
}

} // namespace detail

/**
Cumulative integral of sampled values over a monotone grid, one output per
node, F[0] = 0. Each interval integrates the cubic through the four nearest
nodes, so the result is 4th-order on smooth data.
*/
inline std::vector<double> cumulative_integral(const std::vector<double>& x,
                                               const std::vector<double>& f)
{
    const size_t n = x.size();
    if (f.size() != n || n < 2)
        throw Error(ErrorCode::InvalidParams, "cumulative integral needs matching grids, n >= 2");

    std::vector<double> out(n, 0.0);
    if (n < 4) {
        for (size_t i = 0; i + 1 < n; ++i)
            out[i + 1] = out[i] + 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
        return out;
    }

    for (size_t i = 0; i + 1 < n; ++i) {
        size_t j0 = (i == 0) ? 0 : (i + 2 < n ? i - 1 : n - 4);
        const double lo = x[i];
        const double hi = x[i + 1] - lo; // work relative to lo to avoid cancellation
        double seg = 0.0;
        for (size_t j = j0; j < j0 + 4; ++j) {
            // integral of the Lagrange basis for node j over the interval
            double roots[3];
            int nr = 0;
            double denom = 1.0;
            for (size_t k = j0; k < j0 + 4; ++k) {
                if (k == j) continue;
                roots[nr++] = x[k] - lo;
                denom *= x[j] - x[k];
            }
            const double s1 = roots[0] + roots[1] + roots[2];
            const double s2 = roots[0]*roots[1] + roots[0]*roots[2] + roots[1]*roots[2];
            const double s3 = roots[0]*roots[1]*roots[2];
            const double basis_int = ((hi * hi * hi * hi) / 4.0) - s1 * (hi * hi * hi) / 3.0
                                   + s2 * (hi * hi) / 2.0 - s3 * hi;
            seg += f[j] * basis_int / denom;
        }
        out[i + 1] = out[i] + seg;
    }
    return out;
}

} // namespace nullcurve
