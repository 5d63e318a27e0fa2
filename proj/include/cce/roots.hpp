#pragma once

#include <cmath>
#include <functional>

#include "cce/errors.hpp"

namespace cce {

// Bisection on a sign-changing bracket, followed by Newton polish when a
// derivative is supplied. Converges to rel_tol relative accuracy.
template <class F, class DF>
inline double bisect_newton(const F& f, const DF& df, double lo, double hi,
                            double rel_tol = 1e-13, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw RootError("non-finite function value at bracket");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw RootError("bracket does not straddle a root");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else { hi = mid; }
        if (hi - lo <= rel_tol * std::abs(mid)) break;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double step = f(x) / d;
        const double xn = x - step;
        if (xn < lo || xn > hi) break;
        x = xn;
        if (std::abs(step) <= rel_tol * std::abs(x)) break;
    }
    return x;
}

template <class F>
inline double bisect(const F& f, double lo, double hi, double rel_tol = 1e-13) {
    return bisect_newton(f, [](double) { return 0.0; }, lo, hi, rel_tol);
}

// Golden-section maximizer of a unimodal function on [lo, hi].
template <class F>
inline double golden_max(const F& f, double lo, double hi, double abs_tol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > abs_tol) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - invphi * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + invphi * (b - a); fd = f(d); }
    }
    return 0.5 * (a + b);
}

} // namespace cce
