#pragma once

#include <array>
#include <cmath>
#include <string>

#include "nullcurve/curve_source.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/matrix4.hpp"
#include "nullcurve/minkowski.hpp"

namespace nullcurve {

namespace detail {

/// Polynomial of degree <= 3, coefficient form.
struct Poly {
    std::array<double, 4> c{};

    double eval(double x) const { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; }

    Poly derived() const { return Poly{{c[1], 2.0 * c[2], 3.0 * c[3], 0.0}}; }

    Poly scaled_plus(double s, const Poly& o) const
    {
        // s * (*this) + o
        Poly r;
        for (size_t i = 0; i < 4; ++i)
            r.c[i] = s * c[i] + o.c[i];
        return r;
    }
};

/**
One coordinate of a catalog curve: exp(alpha t) * (P(t) f1(omega t) + Q(t) f2(omega t))
with (f1, f2) either (cosh, sinh) or (cos, sin). Closed under differentiation,
which keeps every catalog derivative exact.
*/
struct ExpTrigTerm {
    double alpha = 0.0;
    double omega = 1.0;
    bool hyperbolic = true;
    Poly p, q;

    double eval(double t) const
    {
        const double f1 = hyperbolic ? std::cosh(omega * t) : std::cos(omega * t);
        const double f2 = hyperbolic ? std::sinh(omega * t) : std::sin(omega * t);
        return std::exp(alpha * t) * (p.eval(t) * f1 + q.eval(t) * f2);
    }

    ExpTrigTerm derived() const
    {
        ExpTrigTerm d = *this;
        const double sgn = hyperbolic ? 1.0 : -1.0;
        d.p = p.scaled_plus(alpha, p.derived());
        for (size_t i = 0; i < 4; ++i)
            d.p.c[i] += omega * q.c[i];
        d.q = q.scaled_plus(alpha, q.derived());
        for (size_t i = 0; i < 4; ++i)
            d.q.c[i] += sgn * omega * p.c[i];
        return d;
    }
};

struct ExpTrigCurve {
    std::array<ExpTrigTerm, 4> comp;

    Vec4 eval(double t) const
    {
        return Vec4::raw(comp[0].eval(t), comp[1].eval(t), comp[2].eval(t), comp[3].eval(t));
    }

    ExpTrigCurve derived() const
    {
        return ExpTrigCurve{{comp[0].derived(), comp[1].derived(),
                             comp[2].derived(), comp[3].derived()}};
    }
};

inline AnalyticCurve analytic_from(const ExpTrigCurve& c0, double t_min, double t_max)
{
    AnalyticCurve out;
    out.t_min = t_min;
    out.t_max = t_max;
    ExpTrigCurve d = c0;
    for (int k = 0; k <= 4; ++k) {
        out.eval[static_cast<size_t>(k)] = [d](double t) { return d.eval(t); };
        d = d.derived();
    }
    return out;
}

inline ExpTrigTerm hyper_term(double alpha, double omega, double p0, double q0)
{
    ExpTrigTerm t;
    t.alpha = alpha;
    t.omega = omega;
    t.hyperbolic = true;
    t.p.c[0] = p0;
    t.q.c[0] = q0;
    return t;
}

inline ExpTrigTerm trig_term(double alpha, double omega, double p0, double q0)
{
    ExpTrigTerm t = hyper_term(alpha, omega, p0, q0);
    t.hyperbolic = false;
    return t;
}

} // namespace detail

/**
Parameters of the closed-form curve families, with the derived constants
the formulas use. Factories fill the fields relevant to each family.
*/
struct CatalogParams {
    double a = 0.0;     // constant kappa_tilde
    double b = 0.0;     // constant tau_tilde
    double c = 1.0;     // constant torsion when tau_tilde = 0
    double kappa = 0.0; // helix curvature
    double tau = 1.0;   // helix torsion
    // derived
    double q1 = 1.0, q2 = 1.0;
    double w1 = 1.0, w2 = -1.0;
    double m1 = 1.0, m2 = -1.0;
    double v = 1.0, r = 1.0;

    static CatalogParams helix(double kappa, double tau)
    {
        if (tau == 0.0 || !std::isfinite(kappa) || !std::isfinite(tau))
            throw Error(ErrorCode::InvalidParams, "helix requires finite kappa and tau != 0");
        CatalogParams p;
        p.kappa = kappa;
        p.tau = tau;
        const double root = std::sqrt(kappa * kappa + tau * tau);
        p.v = std::sqrt(root - kappa);
        p.r = std::sqrt(root + kappa);
        return p;
    }

    static CatalogParams self_similar(double a, double b, double c)
    {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
            throw Error(ErrorCode::InvalidParams, "non-finite parameter");
        CatalogParams p;
        p.a = a;
        p.b = b;
        p.c = c;
        const double root = std::sqrt(a * a + 1.0);
        p.q1 = std::sqrt(root - a);
        p.q2 = std::sqrt(root + a);
        p.w1 = 2.0 * b + 1.0;
        p.w2 = 2.0 * b - 1.0;
        p.m1 = 2.0 * b + p.q1;
        p.m2 = 2.0 * b - p.q1;
        return p;
    }
};

namespace detail {

inline ExpTrigCurve helix_terms(const CatalogParams& p)
{
    const double amp = 1.0 / std::sqrt(p.v * p.v + p.r * p.r);
    return ExpTrigCurve{{hyper_term(0, p.v, 0, amp / p.v), hyper_term(0, p.v, amp / p.v, 0),
                         trig_term(0, p.r, 0, amp / p.r), trig_term(0, p.r, -amp / p.r, 0)}};
}

inline ExpTrigCurve case_terms(int which, const CatalogParams& p)
{
    const double rt2 = std::sqrt(2.0);
    switch (which) {
    case 1: {
        if (p.c == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 1 requires c != 0");
        const double amp = 1.0 / (p.c * rt2);
        return ExpTrigCurve{{hyper_term(0, 1, 0, amp), hyper_term(0, 1, amp, 0),
                             trig_term(0, 1, 0, amp), trig_term(0, 1, -amp, 0)}};
    }
    case 2: {
        if (p.b == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 2 requires b != 0");
        if (p.w1 == 0.0 || p.w2 == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 2 is singular at b = +-1/2");
        const double sum = (1.0 / p.w1 + 1.0 / p.w2) / (2.0 * rt2);
        const double dif = (1.0 / p.w1 - 1.0 / p.w2) / (2.0 * rt2);
        const double den = (4.0 * p.b * p.b + 1.0) * 2.0 * rt2;
        return ExpTrigCurve{{hyper_term(2 * p.b, 1, sum, dif), hyper_term(2 * p.b, 1, dif, sum),
                             trig_term(2 * p.b, 1, 4.0 * p.b / den, 2.0 / den),
                             trig_term(2 * p.b, 1, -2.0 / den, 4.0 * p.b / den)}};
    }
    case 3: {
        if (p.c == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 3 requires c != 0");
        const double amp = 1.0 / (p.c * rt2);
        return ExpTrigCurve{{hyper_term(0, p.q1, 0, amp / p.q1), hyper_term(0, p.q1, amp / p.q1, 0),
                             trig_term(0, p.q2, 0, amp / p.q2), trig_term(0, p.q2, -amp / p.q2, 0)}};
    }
    case 4: {
        if (p.b == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 4 requires b != 0");
        if (p.m1 == 0.0 || p.m2 == 0.0)
            throw Error(ErrorCode::InvalidParams, "case 4 is singular at 2b = -+q1");
        const double sum = (1.0 / p.m1 + 1.0 / p.m2) / (2.0 * rt2);
        const double dif = (1.0 / p.m1 - 1.0 / p.m2) / (2.0 * rt2);
        const double den = (4.0 * p.b * p.b + p.q2 * p.q2) * 2.0 * rt2;
        return ExpTrigCurve{{hyper_term(2 * p.b, p.q1, sum, dif),
                             hyper_term(2 * p.b, p.q1, dif, sum),
                             trig_term(2 * p.b, p.q2, 4.0 * p.b / den, 2.0 * p.q2 / den),
                             trig_term(2 * p.b, p.q2, -2.0 * p.q2 / den, 4.0 * p.b / den)}};
    }
    default:
        throw Error(ErrorCode::InvalidParams, "case index must be 1..4");
    }
}

inline ExpTrigCurve example_terms()
{
    const double s = 1.0 / std::sqrt(2.0);
    ExpTrigTerm c1 = hyper_term(0, 1, 0, 0);
    c1.p.c = {0.0, -2.0 * s, 0.0, 0.0};       // -2 sigma
    c1.q.c = {2.0 * s, 0.0, s, 0.0};          // sigma^2 + 2
    ExpTrigTerm c2 = hyper_term(0, 1, 0, 0);
    c2.p.c = {2.0 * s, 0.0, s, 0.0};
    c2.q.c = {0.0, -2.0 * s, 0.0, 0.0};
    ExpTrigTerm c3 = trig_term(0, 1, 0, 0);
    c3.p.c = {0.0, 2.0 * s, 0.0, 0.0};        // 2 sigma
    c3.q.c = {-2.0 * s, 0.0, s, 0.0};         // sigma^2 - 2
    ExpTrigTerm c4 = trig_term(0, 1, 0, 0);
    c4.p.c = {2.0 * s, 0.0, -s, 0.0};         // 2 - sigma^2
    c4.q.c = {0.0, 2.0 * s, 0.0, 0.0};
    return ExpTrigCurve{{c1, c2, c3, c4}};
}

} // namespace detail

/// Point on the null helix with Cartan curvatures (kappa, tau), pseudo-arc parameter s.
inline Vec4 null_helix(double kappa, double tau, double s)
{
    const CatalogParams p = CatalogParams::helix(kappa, tau);
    if (p.v == 0.0)
        throw Error(ErrorCode::InvalidParams, "degenerate helix frequencies");
    return detail::helix_terms(p).eval(s);
}

/// Point on the printed self-similar curve of the given family (1..4).
inline Vec4 self_similar_case(int which, const CatalogParams& p, double sigma)
{
    return detail::case_terms(which, p).eval(sigma);
}

/// Point on the quadratic-weight worked example curve.
inline Vec4 example_curve(double sigma)
{
    return detail::example_terms().eval(sigma);
}

/// The frame tangent of the worked example: (1/sqrt2)(cosh, sinh, cos, sin).
inline Vec4 example_lsim(double sigma)
{
    const double s = 1.0 / std::sqrt(2.0);
    return Vec4::raw(s * std::cosh(sigma), s * std::sinh(sigma),
                     s * std::cos(sigma), s * std::sin(sigma));
}

/**
Closed-form flow of the reference frame under the zero-shape-curvature
system, rows (Lsim, Nsim, W1, W2). Exactly pseudo-orthonormal for every
sigma; equals the reference frame at sigma = 0.
*/
inline Mat4 example_frame(double sigma)
{
    const double s = 1.0 / std::sqrt(2.0);
    const double ch = std::cosh(sigma), sh = std::sinh(sigma);
    const double co = std::cos(sigma), si = std::sin(sigma);
    return Mat4::from_rows(Vec4::raw(s * ch, s * sh, s * co, s * si),
                           Vec4::raw(-s * ch, -s * sh, s * co, s * si),
                           Vec4::raw(s * sh, s * ch, -s * si, s * co),
                           Vec4::raw(-s * sh, -s * ch, -s * si, s * co));
}

/// Analytic source for the helix over [t_lo, t_hi].
inline CurveSource helix_curve(double kappa, double tau, double t_lo, double t_hi)
{
    const CatalogParams p = CatalogParams::helix(kappa, tau);
    return CurveSource::analytic(detail::analytic_from(detail::helix_terms(p), t_lo, t_hi));
}

/// Analytic source for a printed self-similar family over [t_lo, t_hi].
inline CurveSource case_curve(int which, const CatalogParams& p, double t_lo, double t_hi)
{
    return CurveSource::analytic(detail::analytic_from(detail::case_terms(which, p), t_lo, t_hi));
}

/// Analytic source for the worked example curve over [t_lo, t_hi].
inline CurveSource example_curve_source(double t_lo, double t_hi)
{
    return CurveSource::analytic(detail::analytic_from(detail::example_terms(), t_lo, t_hi));
}

} // namespace nullcurve
