#pragma once

#include <cmath>
#include <random>

#include "nullcurve/curve_source.hpp"
#include "nullcurve/frame.hpp"
#include "nullcurve/matrix4.hpp"
#include "nullcurve/minkowski.hpp"
#include "nullcurve/similarity.hpp"

namespace testutil {

using nullcurve::Mat4;
using nullcurve::Vec4;

inline double rnd(std::mt19937& gen, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline Vec4 random_vec(std::mt19937& gen, double lo = -2.0, double hi = 2.0)
{
    return Vec4(rnd(gen, lo, hi), rnd(gen, lo, hi), rnd(gen, lo, hi), rnd(gen, lo, hi));
}

inline nullcurve::NullRotationParams random_rotation(std::mt19937& gen)
{
    return nullcurve::NullRotationParams(rnd(gen, 0.5, 2.0), rnd(gen, -1.0, 1.0),
                                         rnd(gen, -1.0, 1.0), rnd(gen, 0.0, 6.28));
}

inline nullcurve::PSimilarity random_similarity(std::mt19937& gen, double mu_lo = 0.1,
                                                double mu_hi = 10.0)
{
    return nullcurve::PSimilarity(rnd(gen, mu_lo, mu_hi), random_rotation(gen),
                                  random_vec(gen));
}

/// A pseudo-orthonormal frame obtained by a random null rotation of the reference frame.
inline Mat4 random_frame(std::mt19937& gen)
{
    return nullcurve::null_rotation_matrix(random_rotation(gen))
           * nullcurve::reference_frame().as_matrix();
}

inline double max_component_diff(const Vec4& a, const Vec4& b)
{
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Hand-written evaluators for the null helix, independent of the library's catalog.
struct HelixOracle {
    double kappa, tau, v, r, amp;

    explicit HelixOracle(double kappa_, double tau_) : kappa(kappa_), tau(tau_)
    {
        const double root = std::sqrt(kappa * kappa + tau * tau);
        v = std::sqrt(root - kappa);
        r = std::sqrt(root + kappa);
        amp = 1.0 / std::sqrt(v * v + r * r);
    }

    Vec4 position(double s) const
    {
        return Vec4(amp * std::sinh(v * s) / v, amp * std::cosh(v * s) / v,
                    amp * std::sin(r * s) / r, -amp * std::cos(r * s) / r);
    }

    Vec4 derivative(double s, int k) const
    {
        // d^k/ds^k of (sinh(vs)/v, cosh(vs)/v, sin(rs)/r, -cos(rs)/r), k >= 1
        const double vp = std::pow(v, k - 1), rp = std::pow(r, k - 1);
        const double vs = v * s, rs = r * s;
        const double c1 = (k % 2 == 1) ? std::cosh(vs) : std::sinh(vs);
        const double c2 = (k % 2 == 1) ? std::sinh(vs) : std::cosh(vs);
        const double phase = k * 1.5707963267948966;
        return Vec4(amp * vp * c1, amp * vp * c2,
                    amp * rp * std::sin(rs + phase), -amp * rp * std::cos(rs + phase));
    }
};

} // namespace testutil
