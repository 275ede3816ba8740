#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "nullcurve/errors.hpp"

namespace nullcurve {

/**
A four-vector in Minkowski space-time with metric diag(-1,1,1,1).
Component 0 carries the timelike sign. Components must be finite.
*/
class Vec4 {
public:
    Vec4() : c_{0.0, 0.0, 0.0, 0.0} {}

    Vec4(double u0, double u1, double u2, double u3) : c_{u0, u1, u2, u3}
    {
        for (double v : c_)
            if (!std::isfinite(v))
                throw Error(ErrorCode::InvalidParams, "non-finite vector component");
    }

    explicit Vec4(const std::array<double, 4>& c) : Vec4(c[0], c[1], c[2], c[3]) {}

    double& operator[](int i) { return c_[static_cast<size_t>(i)]; }
    const double& operator[](int i) const { return c_[static_cast<size_t>(i)]; }

    Vec4 operator+(const Vec4& o) const { return raw(c_[0]+o.c_[0], c_[1]+o.c_[1], c_[2]+o.c_[2], c_[3]+o.c_[3]); }
    Vec4 operator-(const Vec4& o) const { return raw(c_[0]-o.c_[0], c_[1]-o.c_[1], c_[2]-o.c_[2], c_[3]-o.c_[3]); }
    Vec4 operator-() const { return raw(-c_[0], -c_[1], -c_[2], -c_[3]); }
    Vec4 operator*(double a) const { return raw(a*c_[0], a*c_[1], a*c_[2], a*c_[3]); }
    Vec4 operator/(double a) const { return raw(c_[0]/a, c_[1]/a, c_[2]/a, c_[3]/a); }
    Vec4& operator+=(const Vec4& o) { for (int i = 0; i < 4; ++i) c_[i] += o.c_[i]; return *this; }
    Vec4& operator-=(const Vec4& o) { for (int i = 0; i < 4; ++i) c_[i] -= o.c_[i]; return *this; }
    Vec4& operator*=(double a) { for (auto& v : c_) v *= a; return *this; }

    /// Squared Euclidean norm (all-plus metric), used for scale-aware tolerances.
    double euclidean_norm_sq() const
    {
        return c_[0]*c_[0] + c_[1]*c_[1] + c_[2]*c_[2] + c_[3]*c_[3];
    }
    double euclidean_norm() const { return std::sqrt(euclidean_norm_sq()); }

    /// Bypasses the finiteness check; for internal arithmetic whose inputs are already validated.
    static Vec4 raw(double u0, double u1, double u2, double u3)
    {
        Vec4 v;
        v.c_ = {u0, u1, u2, u3};
        return v;
    }

private:
    std::array<double, 4> c_;
};

inline Vec4 operator*(double a, const Vec4& v) { return v * a; }

/// Lorentzian inner product u.v = -u0*v0 + u1*v1 + u2*v2 + u3*v3.
inline double lorentzian_dot(const Vec4& u, const Vec4& v)
{
    return -u[0]*v[0] + u[1]*v[1] + u[2]*v[2] + u[3]*v[3];
}

inline std::ostream& operator<<(std::ostream& os, const Vec4& u)
{
    return os << "(" << u[0] << ", " << u[1] << ", " << u[2] << ", " << u[3] << ")";
}

enum class CausalType { Spacelike, Timelike, Null };

/// Causal classification together with the tolerance that produced it.
struct Classification {
    CausalType type;
    double eps;
};

/// Scale-aware default tolerance for the nullity test.
inline double default_classify_eps(const Vec4& u)
{
    return 1e-9 * std::max(1.0, u.euclidean_norm_sq());
}

/// Null if |u.u| <= eps, Timelike if u.u < -eps, Spacelike if u.u > eps.
inline Classification classify(const Vec4& u, double eps)
{
    if (eps < 0.0)
        throw Error(ErrorCode::InvalidParams, "classification tolerance must be >= 0");
    const double q = lorentzian_dot(u, u);
    if (std::abs(q) <= eps)
        return {CausalType::Null, eps};
    return {q < 0.0 ? CausalType::Timelike : CausalType::Spacelike, eps};
}

inline Classification classify(const Vec4& u)
{
    return classify(u, default_classify_eps(u));
}

} // namespace nullcurve
