#pragma once

#include <optional>
#include <vector>

#include "cce/metric.hpp"

namespace cce::bh {

// V(r) = k + r^2 - 2m / r^{n-2} and its radial derivatives.
double v_potential(int n, int k, double m, double r);
double v_potential_d1(int n, int k, double m, double r);
double v_potential_d2(int n, int k, double m, double r);
double v_potential_d3(int n, int k, double m, double r);

// Extremal threshold of the k=-1 family: m_-(n) and the degenerate horizon
// radius r_+ = ((n-2)/n)^{1/2}.
double extremal_mass(int n);
double extremal_radius(int n);

// Largest positive root of V, when it exists.
// Throws NoHorizonError when V > 0 on (0, inf); BelowExtremalError for
// k = -1, m < m_-(n).
double horizon_radius(int n, int k, double m);

// Smoothness period of theta at the horizon, Eq.-(2.13) form; +infinity at a
// degenerate horizon (denominator below 1e-10).
double period_beta(int n, int k, double r_plus);

// m with V(r_plus) = 0: m = r_plus^{n-2} (k + r_plus^2) / 2.
double mass_from_horizon(int n, int k, double r_plus);

struct BlackHoleParams {
    int n = 3;
    int k = 1;
    double m = 0.0;
    std::optional<double> r_plus;
    double beta = 0.0; // +infinity marks a degenerate horizon
};

// Derived data for (n, k, m); r_plus absent when there is no horizon.
BlackHoleParams black_hole_params(int n, int k, double m);

struct FoldData {
    int n = 3;
    double r_fold = 0.0;
    double m0 = 0.0;
    double beta0 = 0.0;             // numerical maximum of beta over r_+ > 0
    double beta0_closed_form = 0.0; // 2 pi ((n-2)/n)^{1/2}
    bool matches_closed_form = false;
    double analytic_check = 0.0;    // |r_fold^2 - (n-2)/n|
};

// Maximum of the k=+1 period map: golden-section bracket, then a Newton
// polish on d(beta)/dr = 0 (golden alone stalls at the sqrt(eps) flatness
// floor of the quadratic maximum). beta0 and the closed form
// 2 pi ((n-2)/n)^{1/2} agree only at n = 3; both are reported.
FoldData fold_point(int n);

// All masses with beta(m) = beta_target, ascending. k=+1: two below the fold
// value, none above; k in {0,-1}: exactly one (monotone period map).
std::vector<double> beta_preimages(int n, int k, double beta_target);

// The metric V^{-1} dr^2 + V dtheta^2 + r^2 g_N on [r_lo, r_max] with
// closed-form derivatives and theta_length = beta. r_lo = r_+(1 + 1e-3) when
// a horizon exists, 1e-3 * r_max otherwise (hyperbolic / cone cases).
CohomOneMetric build_metric(int n, int k, double m, double r_max);

} // namespace cce::bh
