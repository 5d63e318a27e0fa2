#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "cce/errors.hpp"
#include "cce/fiber.hpp"

namespace cce {

// Scalar warp function of the interval coordinate with evaluable first and
// second derivatives. Families with closed-form derivatives attach them;
// otherwise centered finite differences of the value are used.
struct WarpFunction {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    static WarpFunction constant(double c) {
        return {[c](double) { return c; },
                [](double) { return 0.0; },
                [](double) { return 0.0; }};
    }

    // Order-2 centered differences for families without closed-form derivatives.
    static WarpFunction from_value(std::function<double(double)> v, double fd_step) {
        if (fd_step <= 0.0) throw StepError("finite-difference step must be positive");
        auto d1 = [v, fd_step](double x) { return (v(x + fd_step) - v(x - fd_step)) / (2.0 * fd_step); };
        auto d2 = [v, fd_step](double x) {
            return (v(x + fd_step) - 2.0 * v(x) + v(x - fd_step)) / (fd_step * fd_step);
        };
        return {std::move(v), std::move(d1), std::move(d2)};
    }
};

// Metric of the form a(x)^2 dx^2 + f(x)^2 dtheta^2 + h(x)^2 g_N on
// I x S^1 x N. `n` is the Einstein normalization (target Ric = -n g).
// With no fiber the metric is the 2-dimensional surface a^2 dx^2 + f^2 dtheta^2.
struct CohomOneMetric {
    int n = 3;
    std::optional<FiberSpec> fiber;
    double x_lo = 0.0;
    double x_hi = 1.0;
    WarpFunction a;
    WarpFunction f;
    WarpFunction h;
    double theta_length = 2.0 * M_PI;

    bool has_fiber() const { return fiber.has_value(); }
    int dim() const { return 2 + (fiber ? fiber->dim : 0); }

    void require_interior(double x) const {
        if (!(x > x_lo && x < x_hi))
            throw DomainError("coordinate outside the open metric domain");
    }
};

} // namespace cce
