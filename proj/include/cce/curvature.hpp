#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cce/metric.hpp"

namespace cce {

// The four distinct plane curvatures of the ansatz, in the fixed order
// (x^theta, x^fiber, theta^fiber, fiber^fiber). Fiber entries are NaN for
// a fiberless (2-dimensional) metric.
struct SectionalCurvatures {
    double x_theta = 0.0;
    double x_fiber = std::numeric_limits<double>::quiet_NaN();
    double theta_fiber = std::numeric_limits<double>::quiet_NaN();
    double fiber_fiber = std::numeric_limits<double>::quiet_NaN();
    bool has_fiber = false;

    std::array<double, 4> as_array() const { return {x_theta, x_fiber, theta_fiber, fiber_fiber}; }

    // max |K + 1| over available planes, the Eq.-style hyperbolicity deviation
    double max_deviation_from(double target) const {
        double m = std::abs(x_theta - target);
        if (has_fiber) {
            m = std::max(m, std::abs(x_fiber - target));
            m = std::max(m, std::abs(theta_fiber - target));
            m = std::max(m, std::abs(fiber_fiber - target));
        }
        return m;
    }
};

struct CurvatureReport {
    double x = 0.0;
    // Ricci eigenvalues in a g-orthonormal frame (x, theta, fiber blocks).
    double ricci_x = 0.0;
    double ricci_theta = 0.0;
    double ricci_fiber = std::numeric_limits<double>::quiet_NaN();
    // max |eigenvalue| of Ric + n g in the orthonormal frame
    double einstein_residual = 0.0;
    SectionalCurvatures sectional;
};

namespace detail {

struct UnitSpeedDerivs {
    double v, dot, ddot; // value, D v, D^2 v with D = (1/a) d/dx
};

inline UnitSpeedDerivs unit_speed(const WarpFunction& w, double av, double a1, double x) {
    const double v = w.value(x);
    const double v1 = w.d1(x);
    const double v2 = w.d2(x);
    if (!std::isfinite(v) || !std::isfinite(v1) || !std::isfinite(v2))
        throw EvaluationError("non-finite warp-function evaluation");
    return {v, v1 / av, v2 / (av * av) - v1 * a1 / (av * av * av)};
}

} // namespace detail

// Ricci blocks, Einstein residual and plane curvatures of the ansatz at x,
// from the warped-product reductions (orthonormal frame, closed form).
inline CurvatureReport ricci_cohom_one(const CohomOneMetric& g, double x) {
    g.require_interior(x);
    const double av = g.a.value(x);
    const double a1 = g.a.d1(x);
    if (!std::isfinite(av) || !std::isfinite(a1)) throw EvaluationError("non-finite a(x)");
    if (!(av > 0.0)) throw EvaluationError("a(x) must be positive");

    const auto F = detail::unit_speed(g.f, av, a1, x);
    if (!(F.v > 0.0)) throw EvaluationError("f(x) must be positive");

    CurvatureReport rep;
    rep.x = x;
    const double n = static_cast<double>(g.n);
    const double kxt = -F.ddot / F.v;
    rep.sectional.x_theta = kxt;

    if (!g.has_fiber()) {
        rep.ricci_x = kxt;     // surface: Ric = K g
        rep.ricci_theta = kxt;
        rep.einstein_residual = std::abs(kxt + n);
        return rep;
    }

    const auto H = detail::unit_speed(g.h, av, a1, x);
    if (!(H.v > 0.0)) throw EvaluationError("h(x) must be positive");
    const FiberSpec& fib = *g.fiber;
    const double d = static_cast<double>(fib.dim);
    const double kf = static_cast<double>(fib.k);

    const double lf = F.dot / F.v;
    const double lh = H.dot / H.v;

    rep.ricci_x = -F.ddot / F.v - d * H.ddot / H.v;
    rep.ricci_theta = -F.ddot / F.v - d * lf * lh;
    rep.ricci_fiber = kf * (d - 1.0) / (H.v * H.v) - H.ddot / H.v - (d - 1.0) * lh * lh - lf * lh;

    rep.sectional.has_fiber = true;
    rep.sectional.x_fiber = -H.ddot / H.v;
    rep.sectional.theta_fiber = -lf * lh;
    rep.sectional.fiber_fiber = (kf - H.dot * H.dot) / (H.v * H.v);

    rep.einstein_residual = std::max({std::abs(rep.ricci_x + n),
                                      std::abs(rep.ricci_theta + n),
                                      std::abs(rep.ricci_fiber + n)});
    return rep;
}

// Plane-curvature profile at the given interior samples, deterministic order.
inline std::vector<CurvatureReport> sectional_profile(const CohomOneMetric& g,
                                                      std::span<const double> xs) {
    std::vector<CurvatureReport> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(ricci_cohom_one(g, x));
    return out;
}

// The metric c^2 g (constant conformal rescale); sectional curvatures scale
// by c^-2 while Ric keeps its eigenvalues in the coordinate sense.
inline CohomOneMetric scaled_metric(const CohomOneMetric& g, double c) {
    if (!(c > 0.0)) throw DomainError("scale factor must be positive");
    CohomOneMetric out = g;
    auto scale = [c](const WarpFunction& w) {
        return WarpFunction{[c, w](double x) { return c * w.value(x); },
                            [c, w](double x) { return c * w.d1(x); },
                            [c, w](double x) { return c * w.d2(x); }};
    };
    out.a = scale(g.a);
    out.f = scale(g.f);
    out.h = g.has_fiber() ? scale(g.h) : g.h;
    return out;
}

} // namespace cce
