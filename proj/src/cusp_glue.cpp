#include "cce/cusp_glue.hpp"

#include <algorithm>
#include <cmath>

#include "cce/blackhole.hpp"
#include "cce/curvature.hpp"
#include "cce/errors.hpp"
#include "cce/linear_fit.hpp"
#include "cce/quadrature.hpp"

namespace cce::glue {
namespace {

// j-th derivative of V(r) = -1 + r^2 - 2m r^{2-n} for j >= 3 (power tail only).
double v_deriv_high(int n, double m, int j, double r) {
    double coef = -2.0 * m;
    for (int i = 0; i < j; ++i) coef *= static_cast<double>(2 - n - i);
    return coef * std::pow(r, 2 - n - j);
}

// Synthetic division of a polynomial (descending coefficients) by (r - root).
std::vector<double> deflate(const std::vector<double>& c, double root) {
    std::vector<double> out(c.size() - 1);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < c.size(); ++i) {
        acc = acc * root + c[i];
        out[i] = acc;
    }
    return out;
}

double eval_poly(const std::vector<double>& c, double r) {
    double acc = 0.0;
    for (double ci : c) acc = acc * r + ci;
    return acc;
}

} // namespace

ExtremalMetric::ExtremalMetric(int n, double beta, double s_min, double s_max, double quad_tol)
    : n_(n), beta_(beta), s_min_(s_min), s_max_(s_max), quad_tol_(quad_tol) {
    if (n < 3) throw DomainError("n must be >= 3");
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(s_min < s_max)) throw DomainError("empty s range");
    m_ = bh::extremal_mass(n);
    r_plus_ = bh::extremal_radius(n);

    // P(r) = r^{n-2} V(r) = r^n - r^{n-2} - 2m has a double root at r_+.
    std::vector<double> p(static_cast<size_t>(n) + 1, 0.0);
    p[0] = 1.0;
    p[2] = -1.0;
    p[static_cast<size_t>(n)] = -2.0 * m_;
    q_ = deflate(deflate(p, r_plus_), r_plus_);

    // Taylor coefficients of W(u) = V/u^2 about u = 0.
    const double nn = static_cast<double>(n);
    w_taylor_[0] = nn; // V''(r_+)/2 = n
    w_taylor_[1] = v_deriv_high(n, m_, 3, r_plus_) / 6.0;
    w_taylor_[2] = v_deriv_high(n, m_, 4, r_plus_) / 24.0;
    w_taylor_[3] = v_deriv_high(n, m_, 5, r_plus_) / 120.0;

    // s(u) ladder: s = ln(u)/sqrt(n) + R(u), R(u) = int_0^u reg. Geometric
    // nodes from the series cut upward until s_max (plus margin) is covered.
    const double sn = std::sqrt(nn);
    double u = series_cut_;
    double s = std::log(u) / sn + reg_integral_series(u);
    lu_nodes_.push_back(std::log(u));
    s_nodes_.push_back(s);
    const double ratio = 1.25;
    while (s < s_max_ + 0.5) {
        const double next = u * ratio;
        const double inc = integrate([this](double t) { return reg_integrand(t); }, u, next,
                                     quad_tol_ * 0.1);
        s += inc + std::log(ratio) / sn;
        u = next;
        lu_nodes_.push_back(std::log(u));
        s_nodes_.push_back(s);
        if (u > 1e60) throw QuadratureError("extremal s-range unreachable");
    }
}

double ExtremalMetric::w_of_u(double u) const {
    const double r = r_plus_ + u;
    return eval_poly(q_, r) * std::pow(r, -(n_ - 2));
}

double ExtremalMetric::v_of_u(double u) const {
    if (!(u >= 0.0)) throw DomainError("radial offset must be nonnegative");
    return u * u * w_of_u(u);
}

double ExtremalMetric::reg_integrand(double u) const {
    // (W^{-1/2} - n^{-1/2}) / u, regular at u = 0.
    const double sn = std::sqrt(static_cast<double>(n_));
    if (u < series_cut_) {
        const double a1 = w_taylor_[1] / w_taylor_[0];
        const double a2 = w_taylor_[2] / w_taylor_[0];
        const double a3 = w_taylor_[3] / w_taylor_[0];
        const double c0 = -0.5 * a1;
        const double c1 = 0.375 * a1 * a1 - 0.5 * a2;
        const double c2 = -0.3125 * a1 * a1 * a1 + 0.75 * a1 * a2 - 0.5 * a3;
        return (c0 + u * (c1 + u * c2)) / sn;
    }
    return (1.0 / std::sqrt(w_of_u(u)) - 1.0 / sn) / u;
}

double ExtremalMetric::reg_integral_series(double u) const {
    const double sn = std::sqrt(static_cast<double>(n_));
    const double a1 = w_taylor_[1] / w_taylor_[0];
    const double a2 = w_taylor_[2] / w_taylor_[0];
    const double a3 = w_taylor_[3] / w_taylor_[0];
    const double c0 = -0.5 * a1;
    const double c1 = 0.375 * a1 * a1 - 0.5 * a2;
    const double c2 = -0.3125 * a1 * a1 * a1 + 0.75 * a1 * a2 - 0.5 * a3;
    return (c0 * u + 0.5 * c1 * u * u + c2 * u * u * u / 3.0) / sn;
}

double ExtremalMetric::s_of_u(double u) const {
    if (!(u > 0.0)) throw DomainError("radial offset must be positive");
    const double sn = std::sqrt(static_cast<double>(n_));
    if (u <= series_cut_) return std::log(u) / sn + reg_integral_series(u);
    const double lu = std::log(u);
    const auto it = std::upper_bound(lu_nodes_.begin(), lu_nodes_.end(), lu);
    size_t j = static_cast<size_t>(std::max<std::ptrdiff_t>(0, it - lu_nodes_.begin() - 1));
    if (j + 1 >= lu_nodes_.size()) j = lu_nodes_.size() - 2;
    const double u_node = std::exp(lu_nodes_[j]);
    const double inc = integrate([this](double t) { return reg_integrand(t); }, u_node, u,
                                 quad_tol_ * 0.1);
    return s_nodes_[j] + inc + (lu - lu_nodes_[j]) / sn;
}

double ExtremalMetric::u_of_s(double s) const {
    const double sn = std::sqrt(static_cast<double>(n_));
    const double s_cut = s_nodes_.front();
    if (s <= s_cut) {
        // series regime: u = exp(sqrt(n) (s - R(u))) with R tiny; fixed point
        double u = std::exp(sn * s);
        for (int i = 0; i < 6; ++i) u = std::exp(sn * (s - reg_integral_series(u)));
        return u;
    }
    if (s > s_nodes_.back())
        throw DomainError("s beyond the tabulated extremal range");
    const auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
    size_t j = static_cast<size_t>(std::max<std::ptrdiff_t>(0, it - s_nodes_.begin() - 1));
    if (j + 1 >= s_nodes_.size()) j = s_nodes_.size() - 2;
    double lo = lu_nodes_[j], hi = lu_nodes_[j + 1];
    double lu = lo + (hi - lo) * (s - s_nodes_[j]) / (s_nodes_[j + 1] - s_nodes_[j]);
    for (int i = 0; i < 60; ++i) {
        const double u = std::exp(lu);
        const double res = s_of_u(u) - s;
        if (std::abs(res) <= 1e-14 * (1.0 + std::abs(s))) break;
        if (res > 0.0) hi = lu;
        else lo = lu;
        // ds/d(ln u) = 1 / sqrt(W)
        double next = lu - res * std::sqrt(w_of_u(u));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lu = next;
    }
    return std::exp(lu);
}

CohomOneMetric ExtremalMetric::metric() const {
    CohomOneMetric g;
    g.n = n_;
    g.fiber = FiberSpec(n_ - 1, -1);
    g.x_lo = s_min_;
    g.x_hi = s_max_;
    g.theta_length = beta_;
    g.a = WarpFunction::constant(1.0);
    const int n = n_;
    const double m = m_;
    auto u_at = [this](double s) { return u_of_s(s); };
    auto v_at = [this](double u) { return v_of_u(u); };
    const double rp = r_plus_;
    // f = sqrt(V(s)): df/ds = V'(r)/2, d2f/ds2 = V''(r) sqrt(V) / 2
    g.f = WarpFunction{
        [u_at, v_at](double s) { return std::sqrt(v_at(u_at(s))); },
        [u_at, n, m, rp](double s) { return 0.5 * bh::v_potential_d1(n, -1, m, rp + u_at(s)); },
        [u_at, v_at, n, m, rp](double s) {
            const double u = u_at(s);
            return 0.5 * bh::v_potential_d2(n, -1, m, rp + u) * std::sqrt(v_at(u));
        }};
    // h = r(s): dh/ds = sqrt(V), d2h/ds2 = V'(r)/2
    g.h = WarpFunction{
        [u_at, rp](double s) { return rp + u_at(s); },
        [u_at, v_at](double s) { return std::sqrt(v_at(u_at(s))); },
        [u_at, n, m, rp](double s) { return 0.5 * bh::v_potential_d1(n, -1, m, rp + u_at(s)); }};
    return g;
}

ExtremalMetric extremal_metric(int n, double beta, double s_min, double s_max) {
    return ExtremalMetric(n, beta, s_min, s_max);
}

namespace {

AsymptoticFit fit_log_v_window(const ExtremalMetric& em, double lo, double hi, int samples) {
    std::vector<double> xs, ys;
    for (int i = 0; i < samples; ++i) {
        const double s = lo + (hi - lo) * i / (samples - 1);
        const double v = em.v_of_s(s);
        if (!(v > 0.0)) throw FitError("non-positive V sampled in the asymptotic fit");
        xs.push_back(s);
        ys.push_back(std::log(v));
    }
    const LineFit lf = fit_line(xs, ys);
    return {lf.slope, std::exp(lf.intercept)};
}

} // namespace

AsymptoticFit v_asymptotic_fit(const ExtremalMetric& em) {
    if (!(em.s_min() <= -4.0))
        throw DomainError("asymptotic fit needs s_min <= -4");
    return fit_log_v_window(em, em.s_min(), em.s_min() + 2.0, 21);
}

CohomOneMetric cusp_limit_metric(int n, double circle_length) {
    if (n < 3) throw DomainError("n must be >= 3");
    if (!(circle_length > 0.0)) throw DomainError("circle length must be positive");
    const double sn = std::sqrt(static_cast<double>(n));
    CohomOneMetric g;
    g.n = n;
    g.fiber = FiberSpec(n - 1, -1);
    g.x_lo = -40.0;
    g.x_hi = 40.0;
    g.theta_length = circle_length;
    g.a = WarpFunction::constant(1.0);
    g.f = WarpFunction{[sn](double s) { return std::exp(sn * s); },
                       [sn](double s) { return sn * std::exp(sn * s); },
                       [sn, n](double s) { return n * std::exp(sn * s); }};
    g.h = WarpFunction::constant(bh::extremal_radius(n));
    return g;
}

CohomOneMetric toral_cusp_metric(int n) {
    if (n < 3) throw DomainError("n must be >= 3");
    CohomOneMetric g;
    g.n = n;
    g.fiber = FiberSpec(n - 1, 0);
    g.x_lo = -40.0;
    g.x_hi = 40.0;
    g.theta_length = 2.0 * M_PI;
    g.a = WarpFunction::constant(1.0);
    const auto exp_warp = WarpFunction{[](double r) { return std::exp(r); },
                                       [](double r) { return std::exp(r); },
                                       [](double r) { return std::exp(r); }};
    g.f = exp_warp;
    g.h = exp_warp;
    return g;
}

namespace {

CohomOneMetric tube_metric_impl(int n, double alpha, double tau, bool with_fiber) {
    if (n < 3) throw DomainError("n must be >= 3");
    if (!(alpha > 0.0 && tau > 0.0)) throw DomainError("alpha and tau must be positive");
    const double sn = std::sqrt(static_cast<double>(n));
    CohomOneMetric g;
    g.n = n;
    if (with_fiber) g.fiber = FiberSpec(n - 1, -1);
    g.x_lo = -tau;
    g.x_hi = tau;
    g.theta_length = alpha;
    g.a = WarpFunction::constant(1.0);
    g.f = WarpFunction{[sn](double t) { return std::cosh(sn * t); },
                       [sn](double t) { return sn * std::sinh(sn * t); },
                       [sn, n](double t) { return n * std::cosh(sn * t); }};
    g.h = WarpFunction::constant(bh::extremal_radius(n));
    return g;
}

} // namespace

CohomOneMetric tube_metric(int n, double alpha, double tau) {
    return tube_metric_impl(n, alpha, tau, true);
}

CohomOneMetric tube_surface_metric(int n, double alpha, double tau) {
    return tube_metric_impl(n, alpha, tau, false);
}

double curvature_convergence_rate(const ExtremalMetric& em) {
    if (!(em.s_min() <= -5.0))
        throw DomainError("convergence-rate fit needs s_min <= -5");
    const int n = em.n();
    const double rp = em.r_plus();
    const double m = em.mass();
    // matched plane curvatures of g_inf: (x theta, x fiber, theta fiber, fiber fiber)
    const double kinf[4] = {-static_cast<double>(n), 0.0, 0.0, -1.0 / (rp * rp)};
    std::vector<double> xs, ys;
    const int samples = 25;
    for (int i = 0; i < samples; ++i) {
        const double s = em.s_min() + 3.0 * i / (samples - 1);
        const double u = em.u_of_s(s);
        const double r = rp + u;
        const double v = em.v_of_u(u);
        const double v1 = bh::v_potential_d1(n, -1, m, r);
        const double v2 = bh::v_potential_d2(n, -1, m, r);
        const double ke[4] = {-0.5 * v2, -0.5 * v1 / r, -0.5 * v1 / r, (-1.0 - v) / (r * r)};
        double dev = 0.0;
        for (int p = 0; p < 4; ++p) dev = std::max(dev, std::abs(ke[p] - kinf[p]));
        if (!(dev > 0.0)) throw FitError("curvature difference underflowed");
        xs.push_back(s);
        ys.push_back(std::log(dev));
    }
    return fit_line(xs, ys).slope;
}

CutoffValue cutoff_chi(double u) {
    if (u <= 1e-3) return {0.0, 0.0, 0.0};
    if (u >= 1.0 - 1e-3) return {1.0, 0.0, 0.0};
    const double gu = 1.0 / u - 1.0 / (1.0 - u);
    const double g1 = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
    const double g2 = 2.0 / (u * u * u) - 2.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u));
    const double chi = 1.0 / (1.0 + std::exp(gu));
    const double d1 = -chi * (1.0 - chi) * g1;
    const double d2 = -(d1 * (1.0 - 2.0 * chi) * g1 + chi * (1.0 - chi) * g2);
    return {chi, d1, d2};
}

GlueConfig make_glue_config(int n, double beta, double R, double collar_width) {
    if (n < 3) throw DomainError("n must be >= 3");
    if (!(beta > 0.0 && R > 0.0 && collar_width > 0.0))
        throw DomainError("beta, R and collar width must be positive");
    GlueConfig c;
    c.n = n;
    c.beta = beta;
    c.R = R;
    c.collar_width = collar_width;
    if (c.R < c.collar_width)
        throw ConfigError("glue location R must be at least the collar width");
    const ExtremalMetric em(n, beta, -R - collar_width, 0.0);
    const double sn = std::sqrt(static_cast<double>(n));
    c.alpha = std::sqrt(em.v_of_s(-R)) * beta / std::cosh(sn * R);
    c.circle_length = std::cosh(sn * R) * c.alpha;
    if (c.alpha > c.eps_admissible)
        throw ConfigError("tube circle alpha exceeds the admissible smallness bound");
    return c;
}

GluedMetric glue(const GlueConfig& config) {
    const int n = config.n;
    const double sn = std::sqrt(static_cast<double>(n));
    const double R = config.R;
    const double w = config.collar_width;
    const double rp = bh::extremal_radius(n);

    auto em = std::make_shared<const ExtremalMetric>(
        n, config.beta, -R - 0.5 * w - 0.25, config.s_extent + 0.25);

    const double alpha = config.alpha;
    const double beta = config.beta;

    // tube side: f = alpha cosh(sqrt(n) x), h = r_+
    auto ft = [alpha, sn](double x) { return alpha * std::cosh(sn * x); };
    auto ft1 = [alpha, sn](double x) { return alpha * sn * std::sinh(sn * x); };
    auto ft2 = [alpha, sn, n](double x) { return alpha * n * std::cosh(sn * x); };
    // extremal side: f = beta sqrt(V(s)), h = r(s), s = x - 2R
    auto fe = [em, beta, R](double x) { return beta * std::sqrt(em->v_of_s(x - 2.0 * R)); };
    auto fe1 = [em, beta, R, n](double x) {
        return 0.5 * beta * bh::v_potential_d1(n, -1, em->mass(), em->r_of_s(x - 2.0 * R));
    };
    auto fe2 = [em, beta, R, n](double x) {
        const double s = x - 2.0 * R;
        return 0.5 * beta * bh::v_potential_d2(n, -1, em->mass(), em->r_of_s(s)) *
               std::sqrt(em->v_of_s(s));
    };
    auto he = [em, R](double x) { return em->r_of_s(x - 2.0 * R); };
    auto he1 = [em, R](double x) { return std::sqrt(em->v_of_s(x - 2.0 * R)); };
    auto he2 = [em, R, n](double x) {
        return 0.5 * bh::v_potential_d1(n, -1, em->mass(), em->r_of_s(x - 2.0 * R));
    };

    const double collar_lo = R - 0.5 * w;
    auto blend = [collar_lo, w](double x, auto&& t0, auto&& t1, auto&& t2, auto&& e0, auto&& e1,
                                auto&& e2, int order) {
        const double uc = (x - collar_lo) / w;
        if (uc <= 0.0) return order == 0 ? t0(x) : (order == 1 ? t1(x) : t2(x));
        if (uc >= 1.0) return order == 0 ? e0(x) : (order == 1 ? e1(x) : e2(x));
        const CutoffValue c = cutoff_chi(uc);
        const double c1 = c.d1 / w, c2 = c.d2 / (w * w);
        const double d0 = e0(x) - t0(x);
        if (order == 0) return (1.0 - c.chi) * t0(x) + c.chi * e0(x);
        const double d1 = e1(x) - t1(x);
        if (order == 1) return (1.0 - c.chi) * t1(x) + c.chi * e1(x) + c1 * d0;
        return (1.0 - c.chi) * t2(x) + c.chi * e2(x) + 2.0 * c1 * d1 + c2 * d0;
    };

    GluedMetric out;
    out.config = config;
    out.extremal = em;
    CohomOneMetric& g = out.metric;
    g.n = n;
    g.fiber = FiberSpec(n - 1, -1);
    g.x_lo = 0.0;
    g.x_hi = 2.0 * R + config.s_extent;
    g.theta_length = 1.0; // periods are folded into f on both sides
    g.a = WarpFunction::constant(1.0);
    g.f = WarpFunction{
        [=](double x) { return blend(x, ft, ft1, ft2, fe, fe1, fe2, 0); },
        [=](double x) { return blend(x, ft, ft1, ft2, fe, fe1, fe2, 1); },
        [=](double x) { return blend(x, ft, ft1, ft2, fe, fe1, fe2, 2); }};
    auto ht = [rp](double) { return rp; };
    auto zero = [](double) { return 0.0; };
    g.h = WarpFunction{
        [=](double x) { return blend(x, ht, zero, zero, he, he1, he2, 0); },
        [=](double x) { return blend(x, ht, zero, zero, he, he1, he2, 1); },
        [=](double x) { return blend(x, ht, zero, zero, he, he1, he2, 2); }};

    // residual profile: collar first, then the exact regions
    const double margin = 1e-6 * (g.x_hi - g.x_lo);
    auto add_samples = [&](double lo, double hi, int count, bool collar) {
        for (int i = 0; i < count; ++i) {
            const double x = lo + (hi - lo) * i / (count - 1);
            const CurvatureReport rep = ricci_cohom_one(g, x);
            out.profile.push_back({x, g.f.value(x), g.h.value(x), rep.einstein_residual});
            if (collar)
                out.residual_sup_collar = std::max(out.residual_sup_collar, rep.einstein_residual);
            else
                out.residual_sup_outside = std::max(out.residual_sup_outside, rep.einstein_residual);
        }
    };
    add_samples(g.x_lo + margin, collar_lo, config.outside_samples, false);
    add_samples(collar_lo, collar_lo + w, config.collar_samples, true);
    add_samples(collar_lo + w, g.x_hi - margin, config.outside_samples, false);
    std::sort(out.profile.begin(), out.profile.end(),
              [](const auto& p, const auto& q) { return p[0] < q[0]; });
    return out;
}

DecayFit residual_decay_fit(int n, double beta, const std::vector<double>& R_list,
                            double collar_width) {
    if (R_list.size() < 4) throw DomainError("residual decay fit needs >= 4 glue radii");
    int in_window = 0;
    for (size_t i = 0; i < R_list.size(); ++i) {
        if (i > 0 && !(R_list[i] > R_list[i - 1]))
            throw DomainError("glue radii must be strictly increasing");
        if (R_list[i] >= 2.0 && R_list[i] <= 6.0) ++in_window;
    }
    if (in_window < 4) throw DomainError("need >= 4 glue radii inside [2, 6]");

    DecayFit fit;
    std::vector<double> xs, ys;
    for (double R : R_list) {
        const GluedMetric gm = glue(make_glue_config(n, beta, R, collar_width));
        fit.residuals.push_back({R, gm.residual_sup_collar});
        xs.push_back(R);
        ys.push_back(std::log(gm.residual_sup_collar));
    }
    fit.slope = fit_line(xs, ys).slope;
    return fit;
}

} // namespace cce::glue
