#pragma once

#include <array>
#include <vector>

#include "cce/metric.hpp"

namespace cce::fg {

// Geodesic compactification chart for the radial ansatz: log rho(r) =
// -int_{r0}^{r} a(r') dr' up to the normalization constant. Canonical
// normalization fixes the boundary fiber block, (rho h)(r) -> 1; reference
// normalization fixes rho(r0) = 1 instead.
struct ChartConfig {
    double quad_tol = 1e-12;
    double x_top = 1e8;           // far node used for the canonical normalizer
    double ladder_ratio = 1.25;   // geometric spacing of the tabulation ladder
    bool canonical = true;
};

class GeodesicChart {
public:
    GeodesicChart(const CohomOneMetric& g, double r0, ChartConfig cfg = {});

    double rho_of_r(double r) const;
    double r_of_rho(double rho) const;

    // tabulation ladder (ascending r, descending rho)
    const std::vector<double>& r_grid() const { return r_nodes_; }
    std::vector<double> rho_grid() const;

    double r0() const { return r0_; }
    double quad_tol() const { return quad_tol_; }
    bool canonical() const { return canonical_; }

    // max defining-ODE residual over ladder segments: each tabulated
    // increment of -log rho is recomputed at 100x tighter tolerance.
    double ode_residual() const;

private:
    double psi_of_r(double r) const; // int_{r0}^{r} a dr
    std::function<double(double)> a_;
    std::vector<double> r_nodes_, psi_nodes_;
    double r0_ = 0.0, psi_ref_ = 0.0, quad_tol_ = 1e-12;
    bool canonical_ = true;
};

GeodesicChart geodesic_defining_function(const CohomOneMetric& g, double r0,
                                         ChartConfig cfg = {});

// The two scalar blocks of g_rho: G_theta(rho) = (rho f)^2, G_fiber(rho) = (rho h)^2.
struct BlockSamples {
    std::vector<double> rho;
    std::vector<double> g_theta;
    std::vector<double> g_fiber;
};

BlockSamples compactified_blocks(const CohomOneMetric& g, const GeodesicChart& chart,
                                 const std::vector<double>& rho_samples);

// Boundary-expansion data from a global least-squares fit of the blocks.
struct FGSeries {
    int n = 0;
    int fit_order = 0;
    // coeff[j] = {theta block, fiber block} coefficient of rho^j, j = 0..fit_order
    std::vector<std::array<double, 2>> coeff;
    // rho^n log(rho) coefficient (n even; identically zero columns otherwise)
    std::array<double, 2> log_coeff{0.0, 0.0};
    double trace_gn = 0.0;        // tr_gamma g_(n) = c_t(n)/c_t(0) + (n-1) c_f(n)/c_f(0)
    bool divergence_zero = true;  // structural for homogeneous boundary data
    double condition = 0.0;       // design-matrix condition number
    std::array<double, 2> fit_rms{0.0, 0.0};
};

// Fit order defaults to n+3 for odd n and n+4 for even n (so the even-power
// tail of the expansion is captured by the model).
int default_fit_order(int n);

FGSeries extract_coefficients(const BlockSamples& blocks, int n, int fit_order,
                              double cond_bound = 1e8);

// One-call pipeline: chart, geometric sample grid, coefficient fit.
struct FgFitConfig {
    double rho_max = 0.065;
    double span = 100.0; // rho_min = rho_max / span
    int nodes = 60;
    double quad_tol = 1e-12;
    int fit_order = -1;  // -1: default_fit_order(n)
    double cond_bound = 1e8;

    FgFitConfig refined(double factor) const;
};

FGSeries fg_extract(const CohomOneMetric& g, double r0, const FgFitConfig& cfg = {});

std::vector<double> geometric_grid(double lo, double hi, int nodes);

// Fitted decay exponent of max-plane |K + 1| against rho.
struct FalloffConfig {
    double rho_lo = 1e-3;
    double rho_hi = 1e-1;
    int samples = 25;
    double einstein_tol = 1e-6; // precondition on the sampled range
    double underflow = 1e-13;   // below this the metric is exactly hyperbolic
};

struct FalloffFit {
    bool exactly_hyperbolic = false;
    double slope = 0.0;
    double dev_at_hi = 0.0, dev_at_lo = 0.0;
};

FalloffFit curvature_falloff_exponent(const CohomOneMetric& g, const GeodesicChart& chart,
                                      FalloffConfig cfg = {});

} // namespace cce::fg
