#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cce/metric.hpp"

namespace cce::glue {

// Extremal (degenerate-horizon) k = -1 black hole in the arclength gauge
// ds^2 + V(s) dtheta^2 + r(s)^2 g_N, with m = m_-(n), r_+ = ((n-2)/n)^{1/2}.
//
// The radial variable is carried internally as the horizon offset
// u = r - r_+, with r^{n-2} V(r) = (r - r_+)^2 Q(r) deflated exactly, so V
// and the s-map stay cancellation-free arbitrarily deep in the cusp. The
// s-coordinate is normalized cusp-adapted: s - ln(u)/sqrt(n) -> 0 as
// u -> 0, which makes V(s) -> n e^{2 sqrt(n) s} with unit prefactor.
class ExtremalMetric {
public:
    ExtremalMetric(int n, double beta, double s_min, double s_max, double quad_tol = 1e-12);

    int n() const { return n_; }
    double beta() const { return beta_; }
    double r_plus() const { return r_plus_; }
    double mass() const { return m_; }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    double quad_tol() const { return quad_tol_; }

    double u_of_s(double s) const;                     // r(s) - r_+
    double r_of_s(double s) const { return r_plus_ + u_of_s(s); }
    double s_of_u(double u) const;                     // inverse map
    double v_of_u(double u) const;                     // V(r_+ + u), deflated form
    double v_of_s(double s) const { return v_of_u(u_of_s(s)); }

    // s-gauge metric (a = 1, f = sqrt(V), h = r, theta_length = beta) with
    // closed-form derivatives through dr/ds = sqrt(V).
    CohomOneMetric metric() const;

private:
    double w_of_u(double u) const; // V / u^2
    double reg_integrand(double u) const;
    double reg_integral_series(double u) const;

    int n_ = 3;
    double beta_ = 1.0;
    double m_ = 0.0, r_plus_ = 0.0;
    double s_min_ = -8.0, s_max_ = 3.0;
    double quad_tol_ = 1e-12;
    std::vector<double> q_;  // deflated polynomial coefficients, descending powers
    double w_taylor_[4] = {0, 0, 0, 0};
    double series_cut_ = 1e-4;
    std::vector<double> lu_nodes_, s_nodes_; // cumulative s at geometric u ladder
};

ExtremalMetric extremal_metric(int n, double beta, double s_min = -8.0, double s_max = 3.0);

struct AsymptoticFit {
    double rate = 0.0;      // target 2 sqrt(n)
    double amplitude = 0.0; // target n
};

// Fit log V(s) = rate * s + log(amplitude) on [s_min, s_min + 2].
AsymptoticFit v_asymptotic_fit(const ExtremalMetric& em);

// Exact cusp limit ds^2 + e^{2 sqrt(n) s} dtheta^2 + r_+^2 g_N (fiber k = -1).
CohomOneMetric cusp_limit_metric(int n, double circle_length);

// Standard hyperbolic cusp dr^2 + e^{2r} (dtheta^2 + g_{T^{n-1}}): every
// direction warps, curvature is -1 on all planes.
CohomOneMetric toral_cusp_metric(int n);

// Hyperbolic tube cross fiber product: dt^2 + cosh^2(sqrt(n) t) dtheta^2
// + r_+^2 g_N, Einstein with constant -n; the surface factor has K = -n.
CohomOneMetric tube_metric(int n, double alpha, double tau);

// The 2-dimensional tube factor alone (no fiber).
CohomOneMetric tube_surface_metric(int n, double alpha, double tau);

// Fitted slope of log max-plane |K_E(s) - K_inf(s)| against s on
// [s_min, s_min + 3]; the four plane types are compared at matched frames.
double curvature_convergence_rate(const ExtremalMetric& em);

struct GlueConfig {
    int n = 3;
    double beta = 1.0;
    double R = 3.0;
    double collar_width = 1.0;
    std::string smoothing = "exp-partition";
    double eps_admissible = 0.1;
    double s_extent = 3.0;      // extremal side reaches s = s_extent
    int collar_samples = 301;
    int outside_samples = 120;
    // derived
    double alpha = 0.0;         // cosh(sqrt(n) R)^{-1} V^{1/2}(-R) beta
    double circle_length = 0.0; // L- = L+ at the seam
};

// Resolve the derived fields; throws ConfigError if R < collar_width or
// alpha exceeds eps_admissible.
GlueConfig make_glue_config(int n, double beta, double R, double collar_width = 1.0);

// C^infinity partition cutoff chi(u) = sigma(u) / (sigma(u) + sigma(1-u)),
// sigma(u) = exp(-1/u); exactly 0 for u <= 0 and 1 for u >= 1.
struct CutoffValue {
    double chi, d1, d2;
};
CutoffValue cutoff_chi(double u);

struct GluedMetric {
    CohomOneMetric metric; // x in [0, 2R + s_extent]; x = t on the tube side, s = x - 2R
    GlueConfig config;
    std::shared_ptr<const ExtremalMetric> extremal;
    std::vector<std::array<double, 4>> profile; // rows (x, f, h, residual)
    double residual_sup_collar = 0.0;
    double residual_sup_outside = 0.0;
};

GluedMetric glue(const GlueConfig& config);

struct DecayFit {
    double slope = 0.0; // target -sqrt(n)
    std::vector<std::array<double, 2>> residuals; // rows (R, residual_sup)
};

// Residual decay of the glued family over increasing R.
DecayFit residual_decay_fit(int n, double beta, const std::vector<double>& R_list,
                            double collar_width = 1.0);

} // namespace cce::glue
