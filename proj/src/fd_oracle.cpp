#include "cce/fd_oracle.hpp"

#include <cmath>
#include <vector>

#include "cce/errors.hpp"

namespace cce {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Full coordinate metric matrix at z = (x, theta, y^1..y^d).
MatrixXd metric_matrix(const CohomOneMetric& g, const VectorXd& z) {
    const int d = g.dim();
    const double x = z(0);
    MatrixXd M = MatrixXd::Zero(d, d);
    const double av = g.a.value(x);
    const double fv = g.f.value(x);
    if (!std::isfinite(av) || !std::isfinite(fv))
        throw EvaluationError("non-finite metric component in oracle");
    M(0, 0) = av * av;
    M(1, 1) = fv * fv;
    if (g.has_fiber()) {
        const double hv = g.h.value(x);
        if (!std::isfinite(hv)) throw EvaluationError("non-finite metric component in oracle");
        M.bottomRightCorner(g.fiber->dim, g.fiber->dim) =
            (hv * hv) * g.fiber->model_metric(z.tail(g.fiber->dim));
    }
    return M;
}

// Christoffel symbols Gamma^l_{mn} from centered differences of the metric.
std::vector<MatrixXd> christoffel(const CohomOneMetric& g, const VectorXd& z, double step) {
    const int d = g.dim();
    std::vector<MatrixXd> dg(d);
    for (int mu = 0; mu < d; ++mu) {
        VectorXd zp = z, zm = z;
        zp(mu) += step;
        zm(mu) -= step;
        dg[mu] = (metric_matrix(g, zp) - metric_matrix(g, zm)) / (2.0 * step);
    }
    const MatrixXd Gi = metric_matrix(g, z).inverse();
    std::vector<MatrixXd> Ga(d, MatrixXd::Zero(d, d));
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                double s = 0.0;
                for (int q = 0; q < d; ++q)
                    s += Gi(l, q) * (dg[m](q, n) + dg[n](q, m) - dg[q](m, n));
                Ga[l](m, n) = 0.5 * s;
            }
    return Ga;
}

} // namespace

FdRicciResult fd_ricci_full(const CohomOneMetric& g, double x, double step) {
    if (!(step > 0.0)) throw StepError("oracle step must be positive");
    if (!(x - 2.0 * step > g.x_lo && x + 2.0 * step < g.x_hi))
        throw DomainError("oracle point must be > 2*step from the domain ends");

    const int d = g.dim();
    VectorXd z0 = VectorXd::Zero(d);
    z0(0) = x;
    if (g.has_fiber()) z0.tail(g.fiber->dim) = g.fiber->base_point();

    const auto Ga0 = christoffel(g, z0, step);
    // d_mu Gamma by a second centered difference
    std::vector<std::vector<MatrixXd>> dGa(d);
    for (int mu = 0; mu < d; ++mu) {
        VectorXd zp = z0, zm = z0;
        zp(mu) += step;
        zm(mu) -= step;
        const auto Gp = christoffel(g, zp, step);
        const auto Gm = christoffel(g, zm, step);
        dGa[mu].resize(d);
        for (int l = 0; l < d; ++l) dGa[mu][l] = (Gp[l] - Gm[l]) / (2.0 * step);
    }

    MatrixXd Ric = MatrixXd::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            double v = 0.0;
            for (int l = 0; l < d; ++l) {
                v += dGa[l][l](m, n) - dGa[n][l](m, l);
                for (int s = 0; s < d; ++s)
                    v += Ga0[l](l, s) * Ga0[s](m, n) - Ga0[l](n, s) * Ga0[s](m, l);
            }
            Ric(m, n) = v;
        }

    const MatrixXd G0 = metric_matrix(g, z0);
    const VectorXd scale = G0.diagonal().cwiseSqrt();
    MatrixXd resid = Ric + static_cast<double>(g.n) * G0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) resid(i, j) /= scale(i) * scale(j);

    FdRicciResult out;
    out.ricci = Ric;
    out.residual_frame = resid;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) out.max_offdiagonal = std::max(out.max_offdiagonal, std::abs(resid(i, j)));

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (resid + resid.transpose()));
    const double rmax = es.eigenvalues().cwiseAbs().maxCoeff();

    CurvatureReport rep;
    rep.x = x;
    rep.ricci_x = Ric(0, 0) / G0(0, 0);
    rep.ricci_theta = Ric(1, 1) / G0(1, 1);
    if (g.has_fiber()) rep.ricci_fiber = Ric(2, 2) / G0(2, 2);
    rep.einstein_residual = rmax;

    // Plane curvatures from the full tensor: R^l_{smn} assembled from the
    // same Gamma data, then K(e_i, e_j) = R_{ijji} / (g_ii g_jj).
    auto plane_k = [&](int i, int j) {
        double rijji = 0.0;
        for (int l = 0; l < d; ++l) {
            double rl = dGa[i][l](j, j) - dGa[j][l](i, j);
            for (int s = 0; s < d; ++s)
                rl += Ga0[l](i, s) * Ga0[s](j, j) - Ga0[l](j, s) * Ga0[s](i, j);
            rijji += G0(i, l) * rl; // lower the first index (diagonal metric)
        }
        return rijji / (G0(i, i) * G0(j, j));
    };
    rep.sectional.x_theta = plane_k(0, 1);
    if (g.has_fiber()) {
        rep.sectional.has_fiber = true;
        rep.sectional.x_fiber = plane_k(0, 2);
        rep.sectional.theta_fiber = plane_k(1, 2);
        rep.sectional.fiber_fiber = plane_k(2, 3);
    }
    out.report = rep;
    return out;
}

CurvatureReport fd_ricci_oracle(const CohomOneMetric& g, double x, double step) {
    return fd_ricci_full(g, x, step).report;
}

} // namespace cce
