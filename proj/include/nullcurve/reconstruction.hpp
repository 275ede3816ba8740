#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nullcurve/errors.hpp"
#include "nullcurve/frame.hpp"
#include "nullcurve/matrix4.hpp"
#include "nullcurve/minkowski.hpp"
#include "nullcurve/shape.hpp"

namespace nullcurve {

/**
Target shape curvatures z1 (kappa_tilde) and z2 (tau_tilde) over a sigma
interval, given as evaluators or interpolated from a sampled signature.
*/
struct ShapeCurvatureSpec {
    std::function<double(double)> z1;
    std::function<double(double)> z2;
    double sigma_min = 0.0;
    double sigma_max = 0.0;

    static ShapeCurvatureSpec constants(double z1v, double z2v, double lo, double hi)
    {
        return ShapeCurvatureSpec{[z1v](double) { return z1v; },
                                  [z2v](double) { return z2v; }, lo, hi};
    }

    static ShapeCurvatureSpec from_signature(const ShapeSignature& sig)
    {
        if (sig.sigma.size() < 2)
            throw Error(ErrorCode::InvalidParams, "signature too short to interpolate");
        auto sigma = sig.sigma;
        auto kt = sig.kappa_tilde;
        auto tt = sig.tau_tilde;
        return ShapeCurvatureSpec{
            [sigma, kt](double s) { return detail::linear_interp(sigma, kt, s); },
            [sigma, tt](double s) { return detail::linear_interp(sigma, tt, s); },
            sig.sigma.front(), sig.sigma.back()};
    }
};

/// Coefficient matrix of the frame system dK/dsigma = M K.
inline Mat4 structure_matrix(double z1)
{
    Mat4 m;
    m(0, 2) = 1.0;
    m(1, 2) = z1;
    m(1, 3) = 1.0;
    m(2, 0) = -z1;
    m(2, 1) = -1.0;
    m(3, 0) = -1.0;
    return m;
}

struct ReconstructionOptions {
    double drift_fail = 1e-6;   // hard failure bound on the Gram residual
    double drift_warn = 1e-8;   // warning bound
    int project_every = 0;      // re-orthonormalize every k steps; 0 = off
    double tau0 = 1.0;          // torsion at sigma0; scales the quadrature by 1/tau0
};

struct FrameSystemResult {
    std::vector<double> sigma;
    std::vector<Mat4> frames;
    double orthonormality_drift = 0.0;
    bool drift_warning = false;
};

struct ReconstructionResult {
    std::vector<double> sigma;
    std::vector<Vec4> curve;
    std::vector<Mat4> frames;
    double orthonormality_drift = 0.0;
    bool drift_warning = false;
};

namespace detail {

inline void check_reconstruction_inputs(const ShapeCurvatureSpec& spec, const Mat4& k0,
                                        double sigma0, double sigma_end, double h)
{
    if (!(h > 0.0))
        throw Error(ErrorCode::InvalidParams, "step must be positive");
    const double res = gram_residual(k0);
    if (!(res <= 1e-12))
        throw Error(ErrorCode::InvalidParams,
                    "initial frame is not pseudo-orthonormal (Gram residual "
                    + std::to_string(res) + ")");
    const double lo = std::min(sigma0, sigma_end), hi = std::max(sigma0, sigma_end);
    const double slack = 1e-9 * std::max(1.0, hi - lo);
    if (lo < spec.sigma_min - slack || hi > spec.sigma_max + slack)
        throw Error(ErrorCode::DomainError,
                    "integration range [" + std::to_string(lo) + ", " + std::to_string(hi)
                    + "] leaves the curvature domain [" + std::to_string(spec.sigma_min)
                    + ", " + std::to_string(spec.sigma_max) + "]");
}

inline double eval_coeff(const std::function<double(double)>& f, double sigma, const char* which)
{
    const double v = f(sigma);
    if (!std::isfinite(v))
        throw Error(ErrorCode::DomainError,
                    std::string(which) + " is not finite at sigma = " + std::to_string(sigma));
    return v;
}

} // namespace detail

/**
Classical RK4 solution of the linear frame system dK/dsigma = M(sigma) K
from sigma0 to sigma_end in steps of size h (the last step is shortened to
land exactly on sigma_end). The Gram residual max|K I* K^T - J*| is the
conserved quantity; it is monitored each step and the run fails with
DriftExceeded past options.drift_fail.
*/
inline FrameSystemResult integrate_frame_system(const ShapeCurvatureSpec& spec, const Mat4& k0,
                                                double sigma0, double sigma_end, double h,
                                                const ReconstructionOptions& options = {})
{
    detail::check_reconstruction_inputs(spec, k0, sigma0, sigma_end, h);
    const double span = sigma_end - sigma0;
    const auto n = static_cast<size_t>(std::ceil(std::abs(span) / h - 1e-12));
    const double step = n == 0 ? 0.0 : span / static_cast<double>(n);

    FrameSystemResult out;
    out.sigma.reserve(n + 1);
    out.frames.reserve(n + 1);
    out.sigma.push_back(sigma0);
    out.frames.push_back(k0);

    Mat4 k = k0;
    for (size_t i = 0; i < n; ++i) {
        const double s = sigma0 + step * static_cast<double>(i);
        const Mat4 m1 = structure_matrix(detail::eval_coeff(spec.z1, s, "z1"));
        const Mat4 mh = structure_matrix(detail::eval_coeff(spec.z1, s + 0.5 * step, "z1"));
        const Mat4 m2 = structure_matrix(detail::eval_coeff(spec.z1, s + step, "z1"));
        const Mat4 f1 = m1 * k;
        const Mat4 f2 = mh * (k + (0.5 * step) * f1);
        const Mat4 f3 = mh * (k + (0.5 * step) * f2);
        const Mat4 f4 = m2 * (k + step * f3);
        k = k + (step / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);

        const double g = gram_residual(k);
        out.orthonormality_drift = std::max(out.orthonormality_drift, g);
        if (g > options.drift_fail)
            throw Error(ErrorCode::DriftExceeded,
                        "Gram residual " + std::to_string(g) + " at sigma = "
                        + std::to_string(s + step));
        if (g > options.drift_warn)
            out.drift_warning = true;
        if (options.project_every > 0 && (i + 1) % static_cast<size_t>(options.project_every) == 0)
            k = lorentz_reproject(k);

        out.sigma.push_back(sigma0 + step * static_cast<double>(i + 1));
        out.frames.push_back(k);
    }
    return out;
}

/**
Builds the null Cartan curve gamma(sigma) = x0 + (1/tau0) * integral of
exp(2 Z) Lsim dsigma, Z = integral of z2, by integrating the frame system,
the antiderivative Z and the curve as one coupled RK4 state.
*/
inline ReconstructionResult reconstruct_curve(const ShapeCurvatureSpec& spec, const Mat4& k0,
                                              const Vec4& x0, double sigma0, double sigma_end,
                                              double h, const ReconstructionOptions& options = {})
{
    detail::check_reconstruction_inputs(spec, k0, sigma0, sigma_end, h);
    if (!(options.tau0 > 0.0))
        throw Error(ErrorCode::InvalidParams, "tau0 must be positive");
    const double span = sigma_end - sigma0;
    const auto n = static_cast<size_t>(std::ceil(std::abs(span) / h - 1e-12));
    const double step = n == 0 ? 0.0 : span / static_cast<double>(n);

    ReconstructionResult out;
    out.sigma.reserve(n + 1);
    out.curve.reserve(n + 1);
    out.frames.reserve(n + 1);
    out.sigma.push_back(sigma0);
    out.curve.push_back(x0);
    out.frames.push_back(k0);

    Mat4 k = k0;
    double z = 0.0;
    Vec4 x = x0;
    const double inv_tau0 = 1.0 / options.tau0;

    struct Slope {
        Mat4 dk;
        double dz;
        Vec4 dx;
    };
    auto slope = [&](double s, const Mat4& kk, double zz) {
        const double z1 = detail::eval_coeff(spec.z1, s, "z1");
        const double z2 = detail::eval_coeff(spec.z2, s, "z2");
        const double weight = inv_tau0 * std::exp(2.0 * zz);
        if (!std::isfinite(weight))
            throw Error(ErrorCode::QuadratureError,
                        "exp(2 int z2) overflowed at sigma = " + std::to_string(s));
        return Slope{structure_matrix(z1) * kk, z2, weight * kk.row(0)};
    };

    for (size_t i = 0; i < n; ++i) {
        const double s = sigma0 + step * static_cast<double>(i);
        const Slope s1 = slope(s, k, z);
        const Slope s2 = slope(s + 0.5 * step, k + (0.5 * step) * s1.dk, z + 0.5 * step * s1.dz);
        const Slope s3 = slope(s + 0.5 * step, k + (0.5 * step) * s2.dk, z + 0.5 * step * s2.dz);
        const Slope s4 = slope(s + step, k + step * s3.dk, z + step * s3.dz);
        k = k + (step / 6.0) * (s1.dk + 2.0 * s2.dk + 2.0 * s3.dk + s4.dk);
        z = z + (step / 6.0) * (s1.dz + 2.0 * s2.dz + 2.0 * s3.dz + s4.dz);
        x = x + (step / 6.0) * (s1.dx + 2.0 * s2.dx + 2.0 * s3.dx + s4.dx);

        const double g = gram_residual(k);
        out.orthonormality_drift = std::max(out.orthonormality_drift, g);
        if (g > options.drift_fail)
            throw Error(ErrorCode::DriftExceeded,
                        "Gram residual " + std::to_string(g) + " at sigma = "
                        + std::to_string(s + step));
        if (g > options.drift_warn)
            out.drift_warning = true;
        if (options.project_every > 0 && (i + 1) % static_cast<size_t>(options.project_every) == 0)
            k = lorentz_reproject(k);

        out.sigma.push_back(sigma0 + step * static_cast<double>(i + 1));
        out.curve.push_back(x);
        out.frames.push_back(k);
    }
    return out;
}

/**
Constant-torsion shortcut: tau_tilde = 0 forces tau = c, and the curve is
x0 + (1/c) * integral of Lsim dsigma.
*/
inline ReconstructionResult reconstruct_tau_const(const std::function<double(double)>& z1,
                                                  double c, const Mat4& k0, const Vec4& x0,
                                                  double sigma0, double sigma_end, double h,
                                                  ReconstructionOptions options = {})
{
    if (!(c > 0.0))
        throw Error(ErrorCode::InvalidParams, "constant torsion must be positive");
    const double lo = std::min(sigma0, sigma_end), hi = std::max(sigma0, sigma_end);
    ShapeCurvatureSpec spec{z1, [](double) { return 0.0; }, lo, hi};
    options.tau0 = c;
    return reconstruct_curve(spec, k0, x0, sigma0, sigma_end, h, options);
}

/// Carries a frame along the z1 flow from sigma_anchor to sigma_target.
inline Mat4 transport_frame(const std::function<double(double)>& z1, const Mat4& k_anchor,
                            double sigma_anchor, double sigma_target, double h = 1e-4)
{
    if (sigma_anchor == sigma_target)
        return k_anchor;
    const double lo = std::min(sigma_anchor, sigma_target);
    const double hi = std::max(sigma_anchor, sigma_target);
    const ShapeCurvatureSpec spec{z1, [](double) { return 0.0; }, lo, hi};
    return integrate_frame_system(spec, k_anchor, sigma_anchor, sigma_target, h).frames.back();
}

} // namespace nullcurve
