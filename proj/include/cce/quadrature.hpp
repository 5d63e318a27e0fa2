#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "cce/errors.hpp"

namespace cce {

// Adaptive Gauss-Kronrod 7-15 quadrature. The integrand must be smooth on
// the closed interval; endpoint singularities are the caller's problem
// (regularize first, see ExtremalMetric).
namespace detail {

// G7-K15 nodes/weights on [-1,1]: {node, gauss weight, kronrod weight}.
// Gauss weight 0 marks Kronrod-only nodes.
inline constexpr double gk15[8][3] = {
    {0.0000000000000000, 0.4179591836734694, 0.2094821410847278},
    {0.4058451513773972, 0.3818300505051189, 0.1903505780647854},
    {0.7415311855993945, 0.2797053914892767, 0.1406532597155259},
    {0.9491079123427585, 0.1294849661688697, 0.0630920926299786},
    {0.2077849550078985, 0.0,                0.2044329400752989},
    {0.5860872354676911, 0.0,                0.1690047266392679},
    {0.8648644233597691, 0.0,                0.1047900103222502},
    {0.9914553711208126, 0.0,                0.0229353220105292},
};

template <class F>
inline void gk15_panel(const F& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double hal = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = gk15[0][1] * f0;
    double k = gk15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hal * gk15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += gk15[i][1] * fi;
        k += gk15[i][2] * fi;
    }
    g7 *= hal;
    k *= hal;
    k15 = k;
    err = std::abs(k - g7);
    if (!std::isfinite(k)) throw QuadratureError("non-finite integrand in quadrature panel");
}

template <class F>
inline double adapt(const F& f, double a, double b, double tol, int depth) {
    double v, e;
    gk15_panel(f, a, b, v, e);
    if (e <= tol || depth > 48) return v;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace detail

// Integrate f over [a,b] to absolute tolerance tol (plus a relative floor).
template <class F>
inline double integrate(const F& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    if (tol <= 0.0) throw QuadratureError("quadrature tolerance must be positive");
    double v, e;
    detail::gk15_panel(f, a, b, v, e);
    const double goal = tol * (1.0 + std::abs(v));
    if (e <= goal) return v;
    const double mid = 0.5 * (a + b);
    return detail::adapt(f, a, mid, 0.5 * goal, 0) + detail::adapt(f, mid, b, 0.5 * goal, 0);
}

} // namespace cce
