#pragma once

#include <cmath>

#include "nullcurve/errors.hpp"
#include "nullcurve/matrix4.hpp"
#include "nullcurve/minkowski.hpp"

namespace nullcurve {

/// Gram residual max|K I* K^T - J*| of a frame matrix with rows (L, N, W1, W2).
inline double gram_residual(const Mat4& k)
{
    return (k * minkowski_metric() * k.transposed() - frame_gram()).max_abs();
}

/**
Lorentzian re-orthonormalization: Newton correction toward K I* K^T = J*.
Leaves an exactly pseudo-orthonormal frame unchanged.
*/
inline Mat4 lorentz_reproject(Mat4 k, int iterations = 2)
{
    for (int it = 0; it < iterations; ++it) {
        const Mat4 e = k * minkowski_metric() * k.transposed() - frame_gram();
        k = k - 0.5 * ((e * frame_gram()) * k);
    }
    return k;
}

/// Inverse of a pseudo-orthonormal frame matrix: K^-1 = I* K^T J*.
inline Mat4 frame_inverse(const Mat4& k)
{
    return minkowski_metric() * k.transposed() * frame_gram();
}

/**
An ordered pseudo-orthonormal quadruple (L, N, W1, W2):
L, N null with L.N = 1, W1, W2 unit spacelike, all mixed products zero.
Orientation convention: det(L, N, W1, W2) = -1, the sign carried by the
reference frame; null rotations preserve it.
*/
struct PseudoOrthonormalFrame {
    Vec4 L, N, W1, W2;

    PseudoOrthonormalFrame(const Vec4& l, const Vec4& n, const Vec4& w1, const Vec4& w2,
                           double tol = 1e-6)
        : L(l), N(n), W1(w1), W2(w2)
    {
        const double res = gram_residual(as_matrix());
        if (!(res <= tol))
            throw Error(ErrorCode::InvalidParams,
                        "frame is not pseudo-orthonormal (Gram residual " + std::to_string(res) + ")");
        if (!(orientation() < 0.0))
            throw Error(ErrorCode::InvalidParams, "frame has the wrong orientation");
    }

    Mat4 as_matrix() const { return Mat4::from_rows(L, N, W1, W2); }

    double orientation() const { return as_matrix().det(); }

    static PseudoOrthonormalFrame from_matrix(const Mat4& k, double tol = 1e-6)
    {
        return PseudoOrthonormalFrame(k.row(0), k.row(1), k.row(2), k.row(3), tol);
    }
};

/**
The fixed reference frame: L = (1,0,1,0)/sqrt2, N = (-1,0,1,0)/sqrt2,
W1 = (0,1,0,1)/sqrt2, W2 = (0,-1,0,1)/sqrt2. All point transformations
and frame transports are anchored to it.
*/
inline const PseudoOrthonormalFrame& reference_frame()
{
    static const PseudoOrthonormalFrame f = [] {
        const double r = 1.0 / std::sqrt(2.0);
        return PseudoOrthonormalFrame(Vec4(r, 0, r, 0), Vec4(-r, 0, r, 0),
                                      Vec4(0, r, 0, r), Vec4(0, -r, 0, r), 1e-14);
    }();
    return f;
}

/**
Completes (L, N, W1) to a frame: the unique unit spacelike vector
Lorentz-orthogonal to all three, signed so that det(L, N, W1, W2) < 0.
*/
inline Vec4 complete_spacelike(const Vec4& l, const Vec4& n, const Vec4& w1)
{
    // Euclidean cofactor null vector of the 3x4 row system, then one index raise.
    const Vec4* r[3] = {&l, &n, &w1};
    auto minor3 = [&](int c0, int c1, int c2) {
        return (*r[0])[c0] * ((*r[1])[c1] * (*r[2])[c2] - (*r[1])[c2] * (*r[2])[c1])
             - (*r[0])[c1] * ((*r[1])[c0] * (*r[2])[c2] - (*r[1])[c2] * (*r[2])[c0])
             + (*r[0])[c2] * ((*r[1])[c0] * (*r[2])[c1] - (*r[1])[c1] * (*r[2])[c0]);
    };
    Vec4 cof = Vec4::raw(minor3(1, 2, 3), -minor3(0, 2, 3), minor3(0, 1, 3), -minor3(0, 1, 2));
    Vec4 w2 = minkowski_metric() * cof;

    const double norm_sq = lorentzian_dot(w2, w2);
    if (!(norm_sq > 0.0))
        throw Error(ErrorCode::NotCartan, "frame completion is not spacelike");
    w2 = w2 / std::sqrt(norm_sq);

    if (Mat4::from_rows(l, n, w1, w2).det() > 0.0)
        w2 = -w2;
    return w2;
}

} // namespace nullcurve
