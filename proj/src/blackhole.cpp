#include "cce/blackhole.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cce/errors.hpp"
#include "cce/roots.hpp"

namespace cce::bh {
namespace {

void check_params(int n, int k) {
    if (n < 3) throw DomainError("n must be >= 3");
    if (k < -1 || k > 1) throw DomainError("k must be -1, 0 or +1");
}

constexpr double kDegenerateDenominator = 1e-10;

} // namespace

double v_potential(int n, int k, double m, double r) {
    check_params(n, k);
    if (!(r > 0.0)) throw DomainError("r must be positive");
    return k + r * r - 2.0 * m * std::pow(r, 2 - n);
}

double v_potential_d1(int n, int k, double m, double r) {
    check_params(n, k);
    if (!(r > 0.0)) throw DomainError("r must be positive");
    return 2.0 * r + 2.0 * (n - 2) * m * std::pow(r, 1 - n);
}

double v_potential_d2(int n, int k, double m, double r) {
    check_params(n, k);
    if (!(r > 0.0)) throw DomainError("r must be positive");
    return 2.0 - 2.0 * static_cast<double>(n - 2) * (n - 1) * m * std::pow(r, -n);
}

double v_potential_d3(int n, int k, double m, double r) {
    check_params(n, k);
    if (!(r > 0.0)) throw DomainError("r must be positive");
    return 2.0 * static_cast<double>(n - 2) * (n - 1) * n * m * std::pow(r, -n - 1);
}

double extremal_mass(int n) {
    check_params(n, -1);
    const double q = static_cast<double>(n - 2) / n;
    return -std::pow(q, 0.5 * n) / (n - 2);
}

double extremal_radius(int n) {
    check_params(n, -1);
    return std::sqrt(static_cast<double>(n - 2) / n);
}

double horizon_radius(int n, int k, double m) {
    check_params(n, k);
    if (k >= 0 && m <= 0.0)
        throw NoHorizonError("V has no positive root for k >= 0, m <= 0");
    if (k == -1) {
        const double mm = extremal_mass(n);
        const double tol = 1e-13 * std::abs(mm);
        if (m < mm - tol) throw BelowExtremalError("mass below the extremal value m_-(n)");
        if (m <= mm + tol) return extremal_radius(n); // degenerate horizon
    }

    auto V = [&](double r) { return v_potential(n, k, m, r); };
    auto dV = [&](double r) { return v_potential_d1(n, k, m, r); };

    // Bracket the largest root and polish. For k >= 0 (m > 0) V is strictly
    // increasing, so the root is unique; for k = -1, m > m_- the largest root
    // lies above the extremal radius, where V is negative.
    double hi = 2.0;
    for (int i = 0; i < 600 && !(V(hi) > 0.0); ++i) hi *= 2.0;
    if (!(V(hi) > 0.0)) throw RootError("failed to bound the horizon from above");

    double lo;
    if (k == -1) {
        lo = extremal_radius(n); // V(r_ext) = -2/n - 2 m r_ext^{2-n} < 0 for m > m_-
    } else {
        lo = std::min(0.5, 0.5 * hi);
        for (int i = 0; i < 2000 && !(V(lo) < 0.0); ++i) lo *= 0.5;
    }
    if (!(V(lo) < 0.0)) throw NoHorizonError("V has no positive root");
    return bisect_newton(V, dV, lo, hi, 1e-13);
}

double period_beta(int n, int k, double r_plus) {
    check_params(n, k);
    if (!(r_plus > 0.0)) throw DomainError("r_plus must be positive");
    const double denom = n * r_plus * r_plus + k * (n - 2);
    if (denom < kDegenerateDenominator) return std::numeric_limits<double>::infinity();
    return 4.0 * M_PI * r_plus / denom;
}

double mass_from_horizon(int n, int k, double r_plus) {
    check_params(n, k);
    if (!(r_plus > 0.0)) throw DomainError("r_plus must be positive");
    return 0.5 * std::pow(r_plus, n - 2) * (k + r_plus * r_plus);
}

BlackHoleParams black_hole_params(int n, int k, double m) {
    BlackHoleParams p;
    p.n = n;
    p.k = k;
    p.m = m;
    try {
        p.r_plus = horizon_radius(n, k, m);
        p.beta = period_beta(n, k, *p.r_plus);
    } catch (const NoHorizonError&) {
        p.r_plus.reset();
        p.beta = 0.0;
    }
    return p;
}

FoldData fold_point(int n) {
    check_params(n, 1);
    auto beta = [n](double r) { return period_beta(n, 1, r); };
    // d(beta)/dr and its derivative, for the post-golden Newton polish
    auto dbeta = [n](double r) {
        const double denom = n * r * r + (n - 2);
        return 4.0 * M_PI * ((n - 2) - n * r * r) / (denom * denom);
    };
    auto ddbeta = [n](double r) {
        const double denom = n * r * r + (n - 2);
        const double num = (n - 2) - n * r * r;
        return 4.0 * M_PI * (-2.0 * n * r * denom - 4.0 * n * r * num) / (denom * denom * denom);
    };
    FoldData fd;
    fd.n = n;
    fd.r_fold = golden_max(beta, 1e-4, 1e2, 1e-6);
    for (int i = 0; i < 8; ++i) {
        const double step = dbeta(fd.r_fold) / ddbeta(fd.r_fold);
        fd.r_fold -= step;
        if (std::abs(step) < 1e-15 * fd.r_fold) break;
    }
    fd.beta0 = beta(fd.r_fold);
    fd.analytic_check = std::abs(fd.r_fold * fd.r_fold - static_cast<double>(n - 2) / n);
    fd.m0 = mass_from_horizon(n, 1, fd.r_fold);
    fd.beta0_closed_form = 2.0 * M_PI * std::sqrt(static_cast<double>(n - 2) / n);
    fd.matches_closed_form = std::abs(fd.beta0 - fd.beta0_closed_form) < 1e-8 * fd.beta0_closed_form;
    return fd;
}

std::vector<double> beta_preimages(int n, int k, double beta_target) {
    check_params(n, k);
    if (!(beta_target > 0.0)) throw DomainError("beta_target must be positive");
    std::vector<double> masses;

    if (k == 0) {
        // beta = 4 pi / (n r_+), monotone: closed-form inversion
        const double r = 4.0 * M_PI / (n * beta_target);
        masses.push_back(mass_from_horizon(n, 0, r));
        return masses;
    }

    if (k == 1) {
        const FoldData fd = fold_point(n);
        if (beta_target > fd.beta0 + 1e-12) return masses;
        if (std::abs(beta_target - fd.beta0) <= 1e-12) {
            masses.push_back(fd.m0);
            return masses;
        }
        auto F = [&](double r) { return period_beta(n, 1, r) - beta_target; };
        auto dF = [&](double r) {
            const double denom = n * r * r + (n - 2);
            return 4.0 * M_PI * ((n - 2) - n * r * r) / (denom * denom);
        };
        double r_hi = fd.r_fold * 2.0;
        while (F(r_hi) > 0.0) r_hi *= 2.0;
        const double r_lo = bisect_newton(F, dF, 1e-9, fd.r_fold, 1e-13);
        const double r_ri = bisect_newton(F, dF, fd.r_fold, r_hi, 1e-13);
        masses.push_back(mass_from_horizon(n, 1, r_lo));
        masses.push_back(mass_from_horizon(n, 1, r_ri));
        std::sort(masses.begin(), masses.end());
        return masses;
    }

    // k = -1: beta decreases from +inf at the extremal radius to 0, one root.
    const double r_ext = extremal_radius(n);
    auto F = [&](double r) { return period_beta(n, -1, r) - beta_target; };
    auto dF = [&](double r) {
        const double denom = n * r * r - (n - 2);
        return -4.0 * M_PI * (n * r * r + (n - 2)) / (denom * denom);
    };
    double lo = r_ext * (1.0 + 1e-9);
    while (!(F(lo) > 0.0)) lo = r_ext + (lo - r_ext) * 1e-2;
    double hi = std::max(2.0 * r_ext, 8.0 * M_PI / (n * beta_target));
    while (F(hi) > 0.0) hi *= 2.0;
    const double r = bisect_newton(F, dF, lo, hi, 1e-13);
    masses.push_back(mass_from_horizon(n, -1, r));
    return masses;
}

CohomOneMetric build_metric(int n, int k, double m, double r_max) {
    check_params(n, k);
    if (!(r_max > 0.0)) throw DomainError("r_max must be positive");

    double r_lo;
    double theta_len;
    try {
        const double rp = horizon_radius(n, k, m);
        const double beta = period_beta(n, k, rp);
        if (!std::isfinite(beta))
            throw DomainError("degenerate horizon: theta period is infinite (extremal family)");
        if (!(r_max > rp)) throw DomainError("r_max must exceed the horizon radius");
        r_lo = rp * (1.0 + 1e-3);
        theta_len = beta;
    } catch (const NoHorizonError&) {
        r_lo = 1e-3 * r_max; // hyperbolic (k=1, m=0) and cone (k=0, m=0) charts
        theta_len = 2.0 * M_PI;
    }

    CohomOneMetric g;
    g.n = n;
    g.fiber = FiberSpec(n - 1, k);
    g.x_lo = r_lo;
    g.x_hi = r_max;
    g.theta_length = theta_len;
    auto V = [n, k, m](double r) { return v_potential(n, k, m, r); };
    auto V1 = [n, k, m](double r) { return v_potential_d1(n, k, m, r); };
    auto V2 = [n, k, m](double r) { return v_potential_d2(n, k, m, r); };
    g.a = WarpFunction{
        [V](double r) { return 1.0 / std::sqrt(V(r)); },
        [V, V1](double r) { return -0.5 * V1(r) * std::pow(V(r), -1.5); },
        [V, V1, V2](double r) {
            const double v = V(r), v1 = V1(r);
            return 0.75 * v1 * v1 * std::pow(v, -2.5) - 0.5 * V2(r) * std::pow(v, -1.5);
        }};
    g.f = WarpFunction{
        [V](double r) { return std::sqrt(V(r)); },
        [V, V1](double r) { return 0.5 * V1(r) / std::sqrt(V(r)); },
        [V, V1, V2](double r) {
            const double v = V(r), v1 = V1(r);
            return 0.5 * V2(r) / std::sqrt(v) - 0.25 * v1 * v1 * std::pow(v, -1.5);
        }};
    g.h = WarpFunction{[](double r) { return r; }, [](double) { return 1.0; },
                       [](double) { return 0.0; }};
    return g;
}

} // namespace cce::bh
