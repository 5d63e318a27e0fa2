#pragma once

#include <Eigen/Dense>
#include <string>

#include "cce/errors.hpp"

namespace cce {

// Closed Einstein fiber (N^{d}, g_N) of constant sectional curvature k, so
// Ric(g_N) = k (d-1) g_N holds exactly. d = n-1 in the ambient families.
struct FiberSpec {
    int dim = 2;  // d >= 2
    int k = 1;    // sign of the sectional curvature, in {-1, 0, +1}

    FiberSpec() = default;
    FiberSpec(int d, int sign) : dim(d), k(sign) {
        if (dim < 2) throw DomainError("fiber dimension must be >= 2");
        if (k < -1 || k > 1) throw DomainError("fiber curvature sign must be -1, 0 or +1");
    }

    // Ricci eigenvalue of the unit model: Ric = k (dim-1) g_N.
    double ricci_constant() const { return static_cast<double>(k) * (dim - 1); }

    std::string model_name() const {
        switch (k) {
            case 1: return "S^" + std::to_string(dim) + "(1)";
            case 0: return "T^" + std::to_string(dim);
            default: return "H^" + std::to_string(dim) + "(-1)";
        }
    }

    // Coordinate model metric at fiber point y, used by the finite-difference
    // oracle: stereographic chart for the sphere, Poincare ball for the
    // hyperbolic form, Cartesian for the torus. Conformally flat in all cases.
    Eigen::MatrixXd model_metric(const Eigen::VectorXd& y) const {
        if (y.size() != dim) throw DomainError("fiber point has wrong dimension");
        if (k == 0) return Eigen::MatrixXd::Identity(dim, dim);
        const double s = y.squaredNorm();
        if (k == -1 && s >= 1.0) throw DomainError("hyperbolic model point outside the unit ball");
        const double c = 2.0 / (1.0 + k * s);
        return (c * c) * Eigen::MatrixXd::Identity(dim, dim);
    }

    // Deterministic base point away from chart degeneracies.
    Eigen::VectorXd base_point() const {
        Eigen::VectorXd y(dim);
        for (int i = 0; i < dim; ++i) y(i) = (k == 0) ? 0.0 : 0.1 + 0.05 * i;
        return y;
    }
};

} // namespace cce
