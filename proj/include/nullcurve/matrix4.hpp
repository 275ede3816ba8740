#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "nullcurve/minkowski.hpp"

namespace nullcurve {

/**
Dense 4x4 real matrix, row-major. Only the handful of operations the
frame machinery needs.
*/
class Mat4 {
public:
    Mat4() : a_{} {}

    double& operator()(int i, int j) { return a_[static_cast<size_t>(4*i + j)]; }
    const double& operator()(int i, int j) const { return a_[static_cast<size_t>(4*i + j)]; }

    static Mat4 identity()
    {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat4 diag(double d0, double d1, double d2, double d3)
    {
        Mat4 m;
        m(0, 0) = d0; m(1, 1) = d1; m(2, 2) = d2; m(3, 3) = d3;
        return m;
    }

    static Mat4 from_rows(const Vec4& r0, const Vec4& r1, const Vec4& r2, const Vec4& r3)
    {
        Mat4 m;
        const Vec4* rows[4] = {&r0, &r1, &r2, &r3};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m(i, j) = (*rows[i])[j];
        return m;
    }

    Vec4 row(int i) const { return Vec4::raw((*this)(i, 0), (*this)(i, 1), (*this)(i, 2), (*this)(i, 3)); }
    Vec4 col(int j) const { return Vec4::raw((*this)(0, j), (*this)(1, j), (*this)(2, j), (*this)(3, j)); }

    Mat4 operator*(const Mat4& o) const
    {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const double aik = (*this)(i, k);
                for (int j = 0; j < 4; ++j)
                    r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Vec4 operator*(const Vec4& v) const
    {
        Vec4 r;
        for (int i = 0; i < 4; ++i)
            r[i] = (*this)(i,0)*v[0] + (*this)(i,1)*v[1] + (*this)(i,2)*v[2] + (*this)(i,3)*v[3];
        return r;
    }

    Mat4 operator+(const Mat4& o) const
    {
        Mat4 r;
        for (size_t i = 0; i < 16; ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    Mat4 operator-(const Mat4& o) const
    {
        Mat4 r;
        for (size_t i = 0; i < 16; ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    Mat4 operator*(double s) const
    {
        Mat4 r;
        for (size_t i = 0; i < 16; ++i) r.a_[i] = s * a_[i];
        return r;
    }

    Mat4 transposed() const
    {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double det() const
    {
        const auto& m = *this;
        auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
            return m(r0,c0) * (m(r1,c1)*m(r2,c2) - m(r1,c2)*m(r2,c1))
                 - m(r0,c1) * (m(r1,c0)*m(r2,c2) - m(r1,c2)*m(r2,c0))
                 + m(r0,c2) * (m(r1,c0)*m(r2,c1) - m(r1,c1)*m(r2,c0));
        };
        return m(0,0) * minor3(1,2,3, 1,2,3)
             - m(0,1) * minor3(1,2,3, 0,2,3)
             + m(0,2) * minor3(1,2,3, 0,1,3)
             - m(0,3) * minor3(1,2,3, 0,1,2);
    }

private:
    std::array<double, 16> a_;
};

inline Mat4 operator*(double s, const Mat4& m) { return m * s; }

/// The metric diag(-1,1,1,1) as a matrix.
inline const Mat4& minkowski_metric()
{
    static const Mat4 m = Mat4::diag(-1.0, 1.0, 1.0, 1.0);
    return m;
}

/// Gram matrix of a pseudo-orthonormal frame (rows L, N, W1, W2): the L/N block is swapped.
inline const Mat4& frame_gram()
{
    static const Mat4 m = [] {
        Mat4 g;
        g(0, 1) = g(1, 0) = 1.0;
        g(2, 2) = g(3, 3) = 1.0;
        return g;
    }();
    return m;
}

/**
Singular values of a 4x4 matrix via cyclic Jacobi on A^T A, descending.
Deterministic; used for scale-aware rank tests.
*/
inline std::array<double, 4> singular_values(const Mat4& a)
{
    Mat4 s = a.transposed() * a;
    for (int sweep = 0; sweep < 16; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
                off = std::max(off, std::abs(s(p, q)));
        if (off < 1e-300 || off < 1e-16 * s.max_abs())
            break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(s(p, q)) == 0.0)
                    continue;
                const double theta = 0.5 * (s(q, q) - s(p, p)) / s(p, q);
                const double t = (theta >= 0 ? 1.0 : -1.0)
                                 / (std::abs(theta) + std::sqrt(theta*theta + 1.0));
                const double c = 1.0 / std::sqrt(t*t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < 4; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
    }
    std::array<double, 4> sv{};
    for (int i = 0; i < 4; ++i)
        sv[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, s(i, i)));
    std::sort(sv.begin(), sv.end(), [](double x, double y) { return x > y; });
    return sv;
}

} // namespace nullcurve
