#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nullcurve/errors.hpp"
#include "nullcurve/minkowski.hpp"
#include "nullcurve/similarity.hpp"

namespace nullcurve {

namespace detail {

/**
Fornberg finite-difference weights for the m-th derivative at x0 on
arbitrary nodes x. Returns one weight per node.
*/
inline std::vector<double> fornberg_weights(const std::vector<double>& x, double x0, int m)
{
    const size_t n = x.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<size_t>(i, static_cast<size_t>(m)));
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i)
        w[i] = c[i][static_cast<size_t>(m)];
    return w;
}

} // namespace detail

/**
A curve given by closed-form evaluators for the position and its first
four parameter derivatives on [t_min, t_max].
*/
struct AnalyticCurve {
    std::array<std::function<Vec4(double)>, 5> eval; // eval[k] = k-th derivative
    double t_min = 0.0;
    double t_max = 0.0;
};

/// A curve given by a dense sample table with strictly increasing parameter.
struct SampledCurve {
    std::vector<double> t;
    std::vector<Vec4> x;

    SampledCurve(std::vector<double> t_, std::vector<Vec4> x_)
        : t(std::move(t_)), x(std::move(x_))
    {
        if (t.size() != x.size())
            throw Error(ErrorCode::InvalidParams, "sample table lengths differ");
        if (t.size() < 10)
            throw Error(ErrorCode::InsufficientSamples,
                        "need at least 10 samples, got " + std::to_string(t.size()));
        for (size_t i = 0; i + 1 < t.size(); ++i)
            if (!(t[i] < t[i + 1]))
                throw Error(ErrorCode::InvalidParams,
                            "parameter values must be strictly increasing (index "
                            + std::to_string(i + 1) + ")");
        for (double v : t)
            if (!std::isfinite(v))
                throw Error(ErrorCode::InvalidParams, "non-finite parameter value");
    }
};

/**
Either an analytic curve or a sample table. Derivative queries on sampled
curves use 9-node stencils with Fornberg weights; the stencil strides the
sample grid so the effective step sits near the truncation/roundoff optimum
for the requested order.
*/
class CurveSource {
public:
    static CurveSource analytic(AnalyticCurve c) { return CurveSource(std::move(c)); }
    static CurveSource sampled(SampledCurve c) { return CurveSource(std::move(c)); }
    static CurveSource sampled(std::vector<double> t, std::vector<Vec4> x)
    {
        return CurveSource(SampledCurve(std::move(t), std::move(x)));
    }

    bool is_analytic() const { return std::holds_alternative<AnalyticCurve>(src_); }

    double t_min() const
    {
        return is_analytic() ? std::get<AnalyticCurve>(src_).t_min
                             : std::get<SampledCurve>(src_).t.front();
    }
    double t_max() const
    {
        return is_analytic() ? std::get<AnalyticCurve>(src_).t_max
                             : std::get<SampledCurve>(src_).t.back();
    }

    const SampledCurve& samples() const
    {
        if (is_analytic())
            throw Error(ErrorCode::InvalidParams, "analytic source has no sample table");
        return std::get<SampledCurve>(src_);
    }

    /// k-th derivative (k = 0 is the position) at t.
    Vec4 derivative(double t, int order) const
    {
        if (order < 0 || order > 4)
            throw Error(ErrorCode::InvalidParams, "derivative order must be in 0..4");
        check_range(t);
        if (is_analytic()) {
            const auto& a = std::get<AnalyticCurve>(src_);
            return a.eval[static_cast<size_t>(order)](t);
        }
        return estimate_derivative(std::get<SampledCurve>(src_), t, order);
    }

private:
    explicit CurveSource(AnalyticCurve c) : src_(std::move(c)) {}
    explicit CurveSource(SampledCurve c) : src_(std::move(c)) {}

    void check_range(double t) const
    {
        const double lo = t_min(), hi = t_max();
        const double slack = 1e-12 * std::max(1.0, hi - lo);
        if (t < lo - slack || t > hi + slack)
            throw Error(ErrorCode::OutOfRange,
                        "t = " + std::to_string(t) + " outside [" + std::to_string(lo) + ", "
                        + std::to_string(hi) + "]");
    }

    static Vec4 estimate_derivative(const SampledCurve& c, double t, int order)
    {
        const size_t n = c.t.size();
        const size_t width = (order == 0) ? 4 : 9;
        if (n < width)
            throw Error(ErrorCode::InsufficientSamples, "stencil does not fit the sample table");

        const auto it = std::lower_bound(c.t.begin(), c.t.end(), t);
        size_t near = static_cast<size_t>(std::distance(c.t.begin(), it));
        if (near == n || (near > 0 && t - c.t[near - 1] < c.t[near] - t))
            --near;

        const size_t stride = (order == 0) ? 1 : pick_stride(c, near, order, n);

        // center the strided window on the nearest node, clamped to the table
        const size_t span = (width - 1) * stride;
        size_t first = near > span / 2 ? near - span / 2 : 0;
        if (first + span >= n)
            first = n - 1 - span;

        std::vector<double> nodes(width);
        for (size_t j = 0; j < width; ++j)
            nodes[j] = c.t[first + j * stride];
        const std::vector<double> w = detail::fornberg_weights(nodes, t, order);

        // derivative weights sum to zero, so the values can be recentered on the
        // stencil midpoint; this stops position magnitudes from amplifying the
        // cancellation error
        const Vec4 base = order > 0 ? c.x[first + (width / 2) * stride] : Vec4();
        Vec4 d;
        for (size_t j = 0; j < width; ++j)
            d += w[j] * (c.x[first + j * stride] - base);
        return d;
    }

    static size_t pick_stride(const SampledCurve& c, size_t near, int order, size_t n)
    {
        const double eps = 2.220446049250313e-16;
        // wider optimum for the fourth derivative, whose weights grow as h^-4
        const double mult = (order >= 4) ? 4.0 : 2.0;
        const double target = mult * std::pow(eps, 1.0 / (order + 4));
        const size_t i0 = near > 0 ? near - 1 : 0;
        const size_t i1 = std::min(i0 + 2, n - 1);
        const double spacing = (c.t[i1] - c.t[i0]) / static_cast<double>(i1 - i0);
        const auto stride = static_cast<size_t>(std::max(1.0, std::round(target / spacing)));
        const size_t max_stride = (n - 1) / 8;
        return std::min(stride, std::max<size_t>(1, max_stride));
    }

    std::variant<AnalyticCurve, SampledCurve> src_;
};

/// Scale-aware nullity guard: the tangent must be null to within rel_tol relative.
inline void require_null_tangent(const Vec4& d1, double t, double rel_tol = 1e-6)
{
    const double q = lorentzian_dot(d1, d1);
    const double scale = std::max(d1.euclidean_norm_sq(), 1e-300);
    if (!(std::abs(q) <= rel_tol * scale))
        throw Error(ErrorCode::NotNullCurve,
                    "tangent is not null at t = " + std::to_string(t)
                    + " (g(T,T)/|T|^2 = " + std::to_string(q / scale) + ")");
}

/// Image of a curve under a p-similarity; derivatives map through the linear part.
inline CurveSource transform_curve(const PSimilarity& f, const CurveSource& c)
{
    require_positive_scale(f);
    const Mat4 a = linear_matrix(f);
    const Vec4 b = f.translation;
    if (c.is_analytic()) {
        AnalyticCurve out;
        out.t_min = c.t_min();
        out.t_max = c.t_max();
        out.eval[0] = [a, b, c](double t) { return a * c.derivative(t, 0) + b; };
        for (int k = 1; k <= 4; ++k)
            out.eval[static_cast<size_t>(k)] = [a, c, k](double t) { return a * c.derivative(t, k); };
        return CurveSource::analytic(std::move(out));
    }
    const auto& s = c.samples();
    std::vector<Vec4> xs(s.x.size());
    for (size_t i = 0; i < s.x.size(); ++i)
        xs[i] = a * s.x[i] + b;
    return CurveSource::sampled(s.t, std::move(xs));
}

} // namespace nullcurve
