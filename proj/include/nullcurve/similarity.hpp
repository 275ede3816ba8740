#pragma once

#include <cmath>

#include "nullcurve/errors.hpp"
#include "nullcurve/frame.hpp"
#include "nullcurve/matrix4.hpp"
#include "nullcurve/minkowski.hpp"

namespace nullcurve {

/**
Parameters of a null rotation: the Lorentz maps stabilizing the null
direction of the reference frame. lambda must be nonzero.
*/
struct NullRotationParams {
    double lambda = 1.0;
    double epsilon = 0.0;
    double zeta = 0.0;
    double theta = 0.0;

    NullRotationParams() = default;

    NullRotationParams(double lambda_, double epsilon_, double zeta_, double theta_)
        : lambda(lambda_), epsilon(epsilon_), zeta(zeta_), theta(theta_)
    {
        if (!std::isfinite(lambda) || !std::isfinite(epsilon) || !std::isfinite(zeta)
            || !std::isfinite(theta))
            throw Error(ErrorCode::InvalidParams, "non-finite null-rotation parameter");
        if (lambda == 0.0)
            throw Error(ErrorCode::InvalidParams, "null rotation requires lambda != 0");
    }

    static NullRotationParams identity() { return NullRotationParams(); }
};

/**
The frame action of a null rotation: the matrix mapping a pseudo-orthonormal
frame, stacked as rows (L, N, W1, W2), to its image. Unit determinant, so
orientation is preserved.
*/
inline Mat4 null_rotation_matrix(const NullRotationParams& p)
{
    const double l = p.lambda, e = p.epsilon, z = p.zeta;
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    Mat4 m;
    m(0, 0) = l;
    m(1, 0) = -0.5 * l * (e * e + z * z);
    m(1, 1) = 1.0 / l;
    m(1, 2) = -e;
    m(1, 3) = z;
    m(2, 0) = l * (e * c + z * s);
    m(2, 2) = c;
    m(2, 3) = -s;
    m(3, 0) = l * (e * s - z * c);
    m(3, 2) = s;
    m(3, 3) = c;
    return m;
}

/**
Reads (lambda, epsilon, zeta, theta) back off a frame-action matrix.
Throws InvalidParams when the matrix is not of null-rotation form.
*/
inline NullRotationParams extract_rotation_params(const Mat4& m, double tol = 1e-9)
{
    const double lambda = m(0, 0);
    if (lambda == 0.0)
        throw Error(ErrorCode::InvalidParams, "matrix is not a null rotation");
    const double theta = std::atan2(m(3, 2), m(2, 2));
    NullRotationParams p(lambda, -m(1, 2), m(1, 3), theta);
    const double res = (null_rotation_matrix(p) - m).max_abs();
    if (!(res <= tol * std::max(1.0, m.max_abs())))
        throw Error(ErrorCode::InvalidParams, "matrix is not a null rotation");
    return p;
}

/**
Coordinate matrix of the point transformation: the linear Lorentz map whose
action on the reference frame realizes the frame action. Obtained by
conjugating with the basis change from standard coordinates to the
reference frame.
*/
inline Mat4 point_matrix(const NullRotationParams& p)
{
    const Mat4 r = null_rotation_matrix(p);
    if ((r - Mat4::identity()).max_abs() == 0.0)
        return Mat4::identity(); // conjugation of the identity is exact
    const Mat4 ke = reference_frame().as_matrix();
    return (frame_inverse(ke) * r * ke).transposed();
}

/**
A p-similarity x -> mu * phi(x) + b: nonzero scale, null rotation, translation.
Negative mu is representable; curve-level operations require mu > 0.
*/
struct PSimilarity {
    double mu = 1.0;
    NullRotationParams rotation;
    Vec4 translation;

    PSimilarity() = default;

    PSimilarity(double mu_, const NullRotationParams& rot, const Vec4& b)
        : mu(mu_), rotation(rot), translation(b)
    {
        if (!std::isfinite(mu) || mu == 0.0)
            throw Error(ErrorCode::InvalidParams, "similarity requires finite mu != 0");
    }

    static PSimilarity identity() { return PSimilarity(); }
};

/// Full linear part mu * Phi as a coordinate matrix.
inline Mat4 linear_matrix(const PSimilarity& f)
{
    return f.mu * point_matrix(f.rotation);
}

inline Vec4 apply_similarity(const PSimilarity& f, const Vec4& x)
{
    return linear_matrix(f) * x + f.translation;
}

/// Composition: apply(compose(f, g), x) == apply(f, apply(g, x)).
inline PSimilarity compose_similarity(const PSimilarity& f, const PSimilarity& g)
{
    // frame actions compose on the right: Phi(r1) Phi(r2) = Phi(r2 r1)
    const Mat4 r = null_rotation_matrix(g.rotation) * null_rotation_matrix(f.rotation);
    return PSimilarity(f.mu * g.mu, extract_rotation_params(r),
                       apply_similarity(f, g.translation));
}

inline PSimilarity invert_similarity(const PSimilarity& f)
{
    // R^-1 = J* R^T J* because frame actions preserve the frame Gram.
    const Mat4 r = null_rotation_matrix(f.rotation);
    const Mat4 rinv = frame_gram() * r.transposed() * frame_gram();
    const NullRotationParams pinv = extract_rotation_params(rinv);
    const Vec4 binv = (point_matrix(pinv) * f.translation) * (-1.0 / f.mu);
    return PSimilarity(1.0 / f.mu, pinv, binv);
}

/// Guards operations that require an orientation- and arc-compatible scale.
inline void require_positive_scale(const PSimilarity& f)
{
    if (!(f.mu > 0.0))
        throw Error(ErrorCode::InvalidParams, "curve-level use requires mu > 0");
}

} // namespace nullcurve
