#include "cce/fg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cce/curvature.hpp"
#include "cce/errors.hpp"
#include "cce/linear_fit.hpp"
#include "cce/quadrature.hpp"

namespace cce::fg {

GeodesicChart::GeodesicChart(const CohomOneMetric& g, double r0, ChartConfig cfg) {
    if (!(r0 > g.x_lo)) throw DomainError("chart reference point must be interior");
    if (!(cfg.ladder_ratio > 1.0)) throw ConfigError("ladder ratio must exceed 1");
    a_ = g.a.value;
    r0_ = r0;
    quad_tol_ = cfg.quad_tol;
    canonical_ = cfg.canonical;

    auto a_checked = [this](double r) {
        const double v = a_(r);
        if (!std::isfinite(v) || !(v > 0.0))
            throw QuadratureError("defining-function integrand hit a non-positive warp");
        return v;
    };

    // Ladder increments are integrated once, so they get a tolerance floor
    // well below the user knob; cumulative panel truncation otherwise
    // contaminates high-order coefficient fits through rho(r).
    const double ladder_tol = std::min(quad_tol_, 1e-14);
    r_nodes_.push_back(r0);
    psi_nodes_.push_back(0.0);
    double r = r0;
    while (r < cfg.x_top) {
        const double next = std::min(r * cfg.ladder_ratio, cfg.x_top);
        const double inc = integrate(a_checked, r, next, ladder_tol);
        r_nodes_.push_back(next);
        psi_nodes_.push_back(psi_nodes_.back() + inc);
        r = next;
    }

    if (canonical_) {
        const double h_top = g.has_fiber() ? g.h.value(r_nodes_.back()) : g.f.value(r_nodes_.back());
        if (!(h_top > 0.0)) throw QuadratureError("non-positive warp at the normalization node");
        psi_ref_ = psi_nodes_.back() - std::log(h_top);
    } else {
        psi_ref_ = 0.0;
    }
}

double GeodesicChart::psi_of_r(double r) const {
    if (!(r >= r_nodes_.front() && r <= r_nodes_.back()))
        throw DomainError("chart evaluation outside the tabulated range");
    const auto it = std::upper_bound(r_nodes_.begin(), r_nodes_.end(), r);
    const size_t j = static_cast<size_t>(std::max<std::ptrdiff_t>(0, it - r_nodes_.begin() - 1));
    return psi_nodes_[j] + integrate(a_, r_nodes_[j], r, quad_tol_);
}

double GeodesicChart::rho_of_r(double r) const { return std::exp(psi_ref_ - psi_of_r(r)); }

double GeodesicChart::r_of_rho(double rho) const {
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    const double target = psi_ref_ - std::log(rho);
    if (target < psi_nodes_.front() - 1e-12 || target > psi_nodes_.back() + 1e-12)
        throw DomainError("rho outside the tabulated chart range");
    const auto it = std::upper_bound(psi_nodes_.begin(), psi_nodes_.end(), target);
    size_t j = static_cast<size_t>(std::max<std::ptrdiff_t>(0, it - psi_nodes_.begin() - 1));
    if (j + 1 >= r_nodes_.size()) j = r_nodes_.size() - 2;

    double lo = r_nodes_[j], hi = r_nodes_[j + 1];
    // Newton on psi(r) = target with psi' = a > 0, guarded by the bracket.
    // The residual is assembled segment-locally: d0 and the panel increment
    // are both O(1), so the big-psi cancellation never touches the result
    // and rho resolves to machine precision.
    const double d0 = psi_nodes_[j] - target;
    double r = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        const double res = d0 + integrate(a_, r_nodes_[j], r, quad_tol_);
        if (std::abs(res) <= 1e-15) break;
        if (res > 0.0) hi = r;
        else lo = r;
        const double step = res / a_(r);
        double rn = r - step;
        if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r)) break;
        r = rn;
    }
    return r;
}

std::vector<double> GeodesicChart::rho_grid() const {
    std::vector<double> out(r_nodes_.size());
    for (size_t i = 0; i < r_nodes_.size(); ++i)
        out[i] = std::exp(psi_ref_ - psi_nodes_[i]);
    return out;
}

double GeodesicChart::ode_residual() const {
    double worst = 0.0;
    for (size_t j = 0; j + 1 < r_nodes_.size(); ++j) {
        const double inc = psi_nodes_[j + 1] - psi_nodes_[j];
        const double fine = integrate(a_, r_nodes_[j], r_nodes_[j + 1], quad_tol_ * 1e-2);
        worst = std::max(worst, std::abs(inc - fine));
    }
    return worst;
}

GeodesicChart geodesic_defining_function(const CohomOneMetric& g, double r0, ChartConfig cfg) {
    return GeodesicChart(g, r0, cfg);
}

BlockSamples compactified_blocks(const CohomOneMetric& g, const GeodesicChart& chart,
                                 const std::vector<double>& rho_samples) {
    if (!g.has_fiber()) throw DomainError("compactified blocks need a fiber factor");
    BlockSamples out;
    out.rho = rho_samples;
    out.g_theta.reserve(rho_samples.size());
    out.g_fiber.reserve(rho_samples.size());
    for (double p : rho_samples) {
        const double r = chart.r_of_rho(p);
        const double ft = p * g.f.value(r);
        const double fh = p * g.h.value(r);
        out.g_theta.push_back(ft * ft);
        out.g_fiber.push_back(fh * fh);
    }
    return out;
}

int default_fit_order(int n) { return (n % 2 == 0) ? n + 4 : n + 3; }

FGSeries extract_coefficients(const BlockSamples& blocks, int n, int fit_order,
                              double cond_bound) {
    const size_t m = blocks.rho.size();
    if (m < static_cast<size_t>(fit_order + 3))
        throw DomainError("too few block samples for the requested fit order");
    if (fit_order < n) throw DomainError("fit order must reach the boundary order n");

    const bool with_log = (n % 2 == 0);
    const int ncols = fit_order + 1 + (with_log ? 1 : 0);
    const double rho_max = *std::max_element(blocks.rho.begin(), blocks.rho.end());

    Eigen::MatrixXd X(static_cast<Eigen::Index>(m), ncols);
    for (size_t i = 0; i < m; ++i) {
        const double u = blocks.rho[i] / rho_max;
        double p = 1.0;
        for (int j = 0; j <= fit_order; ++j) {
            X(static_cast<Eigen::Index>(i), j) = p;
            p *= u;
        }
        if (with_log)
            X(static_cast<Eigen::Index>(i), ncols - 1) =
                std::pow(u, n) * std::log(blocks.rho[i]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < cond_bound))
        throw IllConditionedError("block fit is ill-conditioned; refine the sample grid");

    auto solve_block = [&](const std::vector<double>& data, std::array<double, 2>& rms_slot,
                           int slot) {
        Eigen::VectorXd b(static_cast<Eigen::Index>(m));
        for (size_t i = 0; i < m; ++i) b(static_cast<Eigen::Index>(i)) = data[i];
        Eigen::VectorXd q = svd.solve(b);
        rms_slot[static_cast<size_t>(slot)] =
            std::sqrt((X * q - b).squaredNorm() / static_cast<double>(m));
        return q;
    };

    FGSeries s;
    s.n = n;
    s.fit_order = fit_order;
    s.condition = cond;
    const Eigen::VectorXd qt = solve_block(blocks.g_theta, s.fit_rms, 0);
    const Eigen::VectorXd qf = solve_block(blocks.g_fiber, s.fit_rms, 1);

    s.coeff.resize(static_cast<size_t>(fit_order) + 1);
    double scale = 1.0;
    for (int j = 0; j <= fit_order; ++j) {
        s.coeff[static_cast<size_t>(j)] = {qt(j) / scale, qf(j) / scale};
        scale *= rho_max;
    }
    if (with_log) {
        const double sn = std::pow(rho_max, n);
        s.log_coeff = {qt(ncols - 1) / sn, qf(ncols - 1) / sn};
    }
    // g_(0) is the boundary metric: its blocks must come out positive
    if (!(s.coeff[0][0] > 0.0) || !(s.coeff[0][1] > 0.0))
        throw FitError("extracted boundary metric is not positive definite");
    s.trace_gn = s.coeff[static_cast<size_t>(n)][0] / s.coeff[0][0] +
                 (n - 1) * s.coeff[static_cast<size_t>(n)][1] / s.coeff[0][1];
    s.divergence_zero = true; // theta- and fiber-homogeneous boundary data
    return s;
}

FgFitConfig FgFitConfig::refined(double factor) const {
    FgFitConfig c = *this;
    c.nodes = static_cast<int>(std::lround(nodes * factor));
    c.quad_tol = quad_tol / (factor * factor);
    c.rho_max = rho_max / std::sqrt(factor);
    return c;
}

std::vector<double> geometric_grid(double lo, double hi, int nodes) {
    if (!(lo > 0.0 && hi > lo) || nodes < 2) throw DomainError("bad geometric grid request");
    std::vector<double> g(static_cast<size_t>(nodes));
    const double step = std::log(hi / lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) g[static_cast<size_t>(i)] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

FGSeries fg_extract(const CohomOneMetric& g, double r0, const FgFitConfig& cfg) {
    ChartConfig cc;
    cc.quad_tol = cfg.quad_tol;
    const GeodesicChart chart(g, r0, cc);
    const auto grid = geometric_grid(cfg.rho_max / cfg.span, cfg.rho_max, cfg.nodes);
    const auto blocks = compactified_blocks(g, chart, grid);
    const int order = cfg.fit_order > 0 ? cfg.fit_order : default_fit_order(g.n);
    return extract_coefficients(blocks, g.n, order, cfg.cond_bound);
}

FalloffFit curvature_falloff_exponent(const CohomOneMetric& g, const GeodesicChart& chart,
                                      FalloffConfig cfg) {
    const auto grid = geometric_grid(cfg.rho_lo, cfg.rho_hi, cfg.samples);
    std::vector<double> lx, ly;
    double max_dev = 0.0;
    FalloffFit out;
    for (double p : grid) {
        const double r = chart.r_of_rho(p);
        const CurvatureReport rep = ricci_cohom_one(g, r);
        if (rep.einstein_residual > cfg.einstein_tol)
            throw DomainError("falloff fit requires an Einstein metric on the sampled range");
        const double dev = rep.sectional.max_deviation_from(-1.0);
        max_dev = std::max(max_dev, dev);
        if (p == grid.front()) out.dev_at_lo = dev;
        if (p == grid.back()) out.dev_at_hi = dev;
        if (dev > cfg.underflow) {
            lx.push_back(std::log(p));
            ly.push_back(std::log(dev));
        }
    }
    if (max_dev <= cfg.underflow) {
        out.exactly_hyperbolic = true;
        return out;
    }
    if (lx.size() < grid.size())
        throw FitError("curvature deviation underflowed on part of the window");
    out.slope = fit_line(lx, ly).slope;
    return out;
}

} // namespace cce::fg
