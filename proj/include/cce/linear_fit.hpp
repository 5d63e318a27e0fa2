#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cce/errors.hpp"

namespace cce {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least-squares line y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("fit_line needs >= 2 matched samples");
    Eigen::MatrixXd A(static_cast<Eigen::Index>(x.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        A(i, 0) = x[static_cast<size_t>(i)];
        A(i, 1) = 1.0;
        b(i) = y[static_cast<size_t>(i)];
    }
    Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
    return {sol(0), sol(1)};
}

} // namespace cce
