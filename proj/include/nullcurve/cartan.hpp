#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nullcurve/curve_source.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/frame.hpp"
#include "nullcurve/quadrature.hpp"

namespace nullcurve {

/// Tolerances of the curve-analysis pipeline.
struct AnalysisOptions {
    double nullity_rel_tol = 1e-6; // |g(T,T)| <= tol * |T|^2_euclidean
    double torsion_tol = 1e-12;    // tau_mag at or below this is treated as vanishing
    double rank_rel_tol = 1e-8;    // smallest/largest singular value of the derivative matrix
};

/**
Pseudo-arc length s(t) = integral of (g(gamma'', gamma''))^(1/4) from t0 to t,
by adaptive quadrature. The tangent must be null and the acceleration
spacelike at every evaluation point.
*/
inline double pseudo_arc_length(const CurveSource& c, double t0, double t,
                                double abs_tol = 1e-10, const AnalysisOptions& options = {})
{
    auto rate = [&](double u) {
        const Vec4 d1 = c.derivative(u, 1);
        require_null_tangent(d1, u, options.nullity_rel_tol);
        const Vec4 d2 = c.derivative(u, 2);
        const double q = lorentzian_dot(d2, d2);
        if (!(q > 0.0))
            throw Error(ErrorCode::DegenerateAcceleration,
                        "g(gamma'', gamma'') = " + std::to_string(q) + " at t = " + std::to_string(u));
        return std::pow(q, 0.25);
    };
    return adaptive_quadrature(rate, t0, t, abs_tol);
}

/// Frame and curvatures of a Cartan curve at one parameter value.
struct CartanApparatus {
    PseudoOrthonormalFrame frame;
    double kappa;
    double tau_mag;
    double tau_signed;
    double arc_rate; // ds/dt at the point
};

/**
Computes the Cartan frame (L, N, W1, W2) and curvatures at t by locally
reparameterizing to pseudo-arc. Requires a null tangent, spacelike
acceleration, and first four derivatives of full rank.
*/
inline CartanApparatus cartan_apparatus(const CurveSource& c, double t,
                                        const AnalysisOptions& options = {})
{
    const Vec4 d1 = c.derivative(t, 1);
    require_null_tangent(d1, t, options.nullity_rel_tol);
    const Vec4 d2 = c.derivative(t, 2);
    const Vec4 d3 = c.derivative(t, 3);
    const Vec4 d4 = c.derivative(t, 4);

    const double q = lorentzian_dot(d2, d2);
    if (!(q > 0.0))
        throw Error(ErrorCode::DegenerateAcceleration,
                    "g(gamma'', gamma'') = " + std::to_string(q) + " at t = " + std::to_string(t));

    // chain rule to pseudo-arc: w = ds/dt = q^(1/4)
    const double qp = 2.0 * lorentzian_dot(d2, d3);
    const double qpp = 2.0 * (lorentzian_dot(d3, d3) + lorentzian_dot(d2, d4));
    const double w = std::pow(q, 0.25);
    const double wp = 0.25 * qp / std::pow(q, 0.75);
    const double wpp = 0.25 * (qpp / std::pow(q, 0.75) - 0.75 * qp * qp / std::pow(q, 1.75));

    const double w2 = w * w, w3 = w2 * w, w4 = w3 * w, w5 = w4 * w, w6 = w5 * w;
    const Vec4 gs = d1 / w;
    const Vec4 gss = d2 / w2 - d1 * (wp / w3);
    const Vec4 gsss = d3 / w3 - d2 * (3.0 * wp / w4) - d1 * (wpp / w4) + d1 * (3.0 * wp * wp / w5);
    // The w''' term of the true 4th pseudo-arc derivative is a multiple of the
    // tangent; it affects neither the curvatures nor the frame and is omitted.
    const Vec4 gssss = d4 / w4 - d3 * (6.0 * wp / w5) - d2 * (4.0 * wpp / w5)
                     + d2 * (15.0 * wp * wp / w6) + d1 * (10.0 * wp * wpp / w6)
                     - d1 * (15.0 * wp * wp * wp / (w6 * w));

    const auto sv = singular_values(Mat4::from_rows(gs, gss, gsss, gssss));
    if (!(sv[3] >= options.rank_rel_tol * sv[0]))
        throw Error(ErrorCode::NotCartan,
                    "derivatives are linearly dependent at t = " + std::to_string(t)
                    + " (singular value ratio " + std::to_string(sv[3] / sv[0]) + ")");

    const double kappa = 0.5 * lorentzian_dot(gsss, gsss);
    const Vec4 L = gs;
    const Vec4 W1 = gss;
    const Vec4 N = -gsss - kappa * L;
    const Vec4 W2 = complete_spacelike(L, N, W1);
    const double tau_signed = -lorentzian_dot(gssss, W2);
    return CartanApparatus{PseudoOrthonormalFrame(L, N, W1, W2, 1e-3),
                           kappa, std::abs(tau_signed), tau_signed, w};
}

/**
Cartan data sampled along a curve: parameter, pseudo-arc, curvatures and
frames per node. tau_sign records the (constant) sign of the torsion
relative to the orientation convention.
*/
struct CartanProfile {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<double> kappa;
    std::vector<double> tau_mag;
    std::vector<PseudoOrthonormalFrame> frames;
    double tau_sign = 1.0;
};

/// Profile over an explicit parameter grid.
inline CartanProfile build_profile(const CurveSource& c, const std::vector<double>& grid,
                                   const AnalysisOptions& options = {})
{
    if (grid.size() < 3)
        throw Error(ErrorCode::InsufficientSamples, "profile needs at least 3 nodes");
    CartanProfile p;
    p.t = grid;
    p.kappa.reserve(grid.size());
    p.tau_mag.reserve(grid.size());
    p.frames.reserve(grid.size());
    std::vector<double> rate(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const CartanApparatus a = cartan_apparatus(c, grid[i], options);
        if (!(a.tau_mag > options.torsion_tol))
            throw Error(ErrorCode::ZeroTorsion,
                        "torsion vanishes at t = " + std::to_string(grid[i]));
        if (i == 0)
            p.tau_sign = a.tau_signed > 0.0 ? 1.0 : -1.0;
        else if (a.tau_signed * p.tau_sign < 0.0)
            throw Error(ErrorCode::ZeroTorsion,
                        "torsion changes sign at t = " + std::to_string(grid[i]));
        p.kappa.push_back(a.kappa);
        p.tau_mag.push_back(a.tau_mag);
        p.frames.push_back(a.frame);
        rate[i] = a.arc_rate;
    }
    p.s = cumulative_integral(p.t, rate);
    return p;
}

/// Profile on a uniform grid of n nodes over [t_lo, t_hi].
inline CartanProfile build_profile(const CurveSource& c, double t_lo, double t_hi, size_t n,
                                   const AnalysisOptions& options = {})
{
    if (n < 3)
        throw Error(ErrorCode::InsufficientSamples, "profile needs at least 3 nodes");
    std::vector<double> grid(n);
    for (size_t i = 0; i < n; ++i)
        grid[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return build_profile(c, grid, options);
}

/// Profile over the curve's full range: sample nodes for tables, n uniform nodes otherwise.
inline CartanProfile build_profile(const CurveSource& c, size_t n = 401,
                                   const AnalysisOptions& options = {})
{
    if (!c.is_analytic())
        return build_profile(c, c.samples().t, options);
    return build_profile(c, c.t_min(), c.t_max(), n, options);
}

} // namespace nullcurve
