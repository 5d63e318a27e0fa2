#pragma once

#include <Eigen/Dense>

#include "cce/curvature.hpp"
#include "cce/metric.hpp"

namespace cce {

// Independent verification route: Ricci of the full (x, theta, fiber) metric
// matrix assembled in coordinates, with every partial derivative taken by
// centered finite differences of metric components. No warped-product
// shortcuts; agreement with ricci_cohom_one is O(step^2).
struct FdRicciResult {
    CurvatureReport report;
    Eigen::MatrixXd ricci;           // coordinate components R_{mu nu}
    Eigen::MatrixXd residual_frame;  // (Ric + n g) in the g-orthonormal frame
    double max_offdiagonal = 0.0;    // max |residual_frame| off the diagonal
};

FdRicciResult fd_ricci_full(const CohomOneMetric& g, double x, double step);

CurvatureReport fd_ricci_oracle(const CohomOneMetric& g, double x, double step);

} // namespace cce
