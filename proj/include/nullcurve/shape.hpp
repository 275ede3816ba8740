#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nullcurve/cartan.hpp"
#include "nullcurve/curve_source.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/quadrature.hpp"

namespace nullcurve {

/**
The similarity invariants of a null Cartan curve sampled over the
pseudo-de Sitter parameter: sigma -> (kappa_tilde, tau_tilde).
*/
struct ShapeSignature {
    std::vector<double> sigma;
    std::vector<double> kappa_tilde;
    std::vector<double> tau_tilde;
};

/// Pseudo-de Sitter grid of a profile: cumulative integral of sqrt(tau) ds, zeroed at origin_at.
inline std::vector<double> de_sitter_grid(const CartanProfile& p, size_t origin_at = 0)
{
    if (origin_at >= p.s.size())
        throw Error(ErrorCode::OutOfRange, "sigma origin index out of range");
    std::vector<double> root_tau(p.tau_mag.size());
    for (size_t i = 0; i < p.tau_mag.size(); ++i)
        root_tau[i] = std::sqrt(p.tau_mag[i]);
    std::vector<double> sigma = cumulative_integral(p.s, root_tau);
    const double shift = sigma[origin_at];
    for (double& v : sigma)
        v -= shift;
    return sigma;
}

/**
Shape curvatures over the pseudo-de Sitter parameter:
kappa_tilde = kappa / tau, tau_tilde = -(dtau/dsigma) / (2 tau), with the
torsion gradient by centered differences on the sigma grid (one-sided,
second order, at the ends).

A positive gradient_baseline widens the differencing stencil to roughly
that sigma distance (five nodes, strided). Tabulated torsion carries the
estimation noise of its source; differencing adjacent nodes amplifies it
by 1/h, while the wider baseline keeps the amplification bounded.
*/
inline ShapeSignature de_sitter_reparam(const CartanProfile& p, size_t origin_at = 0,
                                        double gradient_baseline = 0.0)
{
    const size_t n = p.tau_mag.size();
    if (n < 3)
        throw Error(ErrorCode::InsufficientSamples, "signature needs at least 3 nodes");
    ShapeSignature sig;
    sig.sigma = de_sitter_grid(p, origin_at);
    sig.kappa_tilde.resize(n);
    sig.tau_tilde.resize(n);

    size_t stride = 1;
    size_t width = 3;
    if (gradient_baseline > 0.0 && n >= 5) {
        const double h_med = (sig.sigma.back() - sig.sigma.front()) / static_cast<double>(n - 1);
        stride = std::min<size_t>(
            std::max<size_t>(1, static_cast<size_t>(std::llround(gradient_baseline / (2.0 * h_med)))),
            (n - 1) / 4);
        width = 5;
    }

    // tau_tilde = -(1/2) d(ln tau)/dsigma; differencing the logarithm is exact
    // for exponential torsion and equivariant under the 1/mu curvature scaling
    std::vector<double> log_tau(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(p.tau_mag[i] > 0.0))
            throw Error(ErrorCode::ZeroTorsion, "torsion vanishes on the profile");
        log_tau[i] = std::log(p.tau_mag[i]);
    }

    std::vector<double> nodes(width);
    for (size_t i = 0; i < n; ++i) {
        sig.kappa_tilde[i] = p.kappa[i] / p.tau_mag[i];

        const size_t span = (width - 1) * stride;
        size_t j0 = i > span / 2 ? i - span / 2 : 0;
        if (j0 + span >= n)
            j0 = n - 1 - span;
        for (size_t k = 0; k < width; ++k)
            nodes[k] = sig.sigma[j0 + k * stride];
        const std::vector<double> w = detail::fornberg_weights(nodes, sig.sigma[i], 1);
        double dlog = 0.0;
        for (size_t k = 0; k < width; ++k)
            dlog += w[k] * log_tau[j0 + k * stride];
        sig.tau_tilde[i] = -0.5 * dlog;
    }
    return sig;
}

/**
The scaled frames attached to one profile node: C_sim = (sqrt(tau) L,
N / sqrt(tau), W1, W2), which is again pseudo-orthonormal, and the
similarity-invariant frame H_i = C_sim_i / tau.
*/
struct ShapeFrame {
    Vec4 Lsim, Nsim, W1sim, W2sim;
    Vec4 H1, H2, H3, H4;
};

inline ShapeFrame shape_frames(const CartanProfile& p, size_t at, double torsion_tol = 1e-12)
{
    if (at >= p.frames.size())
        throw Error(ErrorCode::OutOfRange, "profile index out of range");
    const double tau = p.tau_mag[at];
    if (!(tau > torsion_tol))
        throw Error(ErrorCode::ZeroTorsion, "torsion vanishes at the requested node");
    const double rt = std::sqrt(tau);
    const PseudoOrthonormalFrame& f = p.frames[at];
    ShapeFrame out;
    out.Lsim = rt * f.L;
    out.Nsim = f.N / rt;
    out.W1sim = f.W1;
    out.W2sim = f.W2;
    out.H1 = out.Lsim / tau;
    out.H2 = out.Nsim / tau;
    out.H3 = out.W1sim / tau;
    out.H4 = out.W2sim / tau;
    return out;
}

/// Torsion-gradient baseline used for sample tables (see de_sitter_reparam).
inline constexpr double kTabulatedGradientBaseline = 0.06;

/// Profile plus signature of a curve in one call (origin at the first node).
inline ShapeSignature analyze_signature(const CurveSource& c, size_t n = 401,
                                        size_t origin_at = 0)
{
    const double baseline = c.is_analytic() ? 0.0 : kTabulatedGradientBaseline;
    return de_sitter_reparam(build_profile(c, n), origin_at, baseline);
}

} // namespace nullcurve
