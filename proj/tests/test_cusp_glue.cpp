#include <doctest.h>

#include <cmath>

#include "cce/blackhole.hpp"
#include "cce/curvature.hpp"
#include "cce/cusp_glue.hpp"
#include "cce/errors.hpp"
#include "cce/fd_oracle.hpp"
#include "cce/linear_fit.hpp"

using namespace cce;
using namespace cce::glue;

TEST_CASE("extremal metric: s-map normalization and inversion") {
    const ExtremalMetric em(3, 1.0, -14.0, 3.0);
    // near-horizon asymptotics: u(s) e^{-sqrt(3) s} -> 1 in the adopted gauge
    CHECK(em.u_of_s(-12.0) * std::exp(std::sqrt(3.0) * 12.0) == doctest::Approx(1.0).epsilon(1e-6));
    // regression pin for the integrated shift: s at unit horizon offset
    CHECK(em.s_of_u(1.0) == doctest::Approx(0.242144211592).epsilon(1e-8));
    // inversion round trip
    for (double s : {-12.0, -6.0, -1.0, 0.5, 2.5})
        CHECK(em.s_of_u(em.u_of_s(s)) == doctest::Approx(s).epsilon(1e-11));
    // ds/dr = 1 / sqrt(V): finite-difference check of the tabulated map
    for (double u : {1e-3, 0.1, 1.0}) {
        const double d = 1e-6 * std::max(u, 1e-2);
        const double fd = (em.s_of_u(u + d) - em.s_of_u(u - d)) / (2.0 * d);
        CHECK(fd == doctest::Approx(1.0 / std::sqrt(em.v_of_u(u))).epsilon(1e-7));
    }
    // monotone, r -> r_+ down the cusp
    CHECK(em.u_of_s(-30.0) < 1e-20);
    CHECK(em.r_of_s(-6.0) < em.r_of_s(0.0));
}

TEST_CASE("extremal metric: V''(r_+) = 2n forces the e^{2 sqrt(n) s} rate") {
    for (int n = 3; n <= 5; ++n)
        CHECK(bh::v_potential_d2(n, -1, bh::extremal_mass(n), bh::extremal_radius(n)) ==
              doctest::Approx(2.0 * n).epsilon(1e-13));
}

TEST_CASE("extremal metric is Einstein everywhere sampled") {
    const ExtremalMetric em = extremal_metric(3, 1.0, -6.0, 3.0);
    const CohomOneMetric g = em.metric();
    for (int i = 1; i <= 25; ++i) {
        const double s = g.x_lo + (g.x_hi - g.x_lo) * i / 26.0;
        CHECK(ricci_cohom_one(g, s).einstein_residual < 1e-8);
    }
}

TEST_CASE("asymptotic fit of V: rate 2 sqrt(n), amplitude n") {
    for (int n : {3, 4}) {
        const ExtremalMetric em(n, 1.0, -6.0, 3.0);
        const AsymptoticFit f = v_asymptotic_fit(em);
        const double sn = std::sqrt(static_cast<double>(n));
        CHECK(f.rate > 2.0 * sn * 0.99);
        CHECK(f.rate < 2.0 * sn * 1.01);
        CHECK(f.amplitude > n * 0.95);
        CHECK(f.amplitude < n * 1.05);
        // the asymptote is approached monotonically within the fitted window
        double prev = -1.0;
        for (double s = -4.0; s >= -8.0; s -= 0.5) {
            const double ratio = n * std::exp(2.0 * sn * s) / em.v_of_s(s);
            const double gap = std::abs(ratio - 1.0);
            if (prev >= 0.0) CHECK(gap < prev);
            prev = gap;
        }
    }
    CHECK_THROWS_AS(v_asymptotic_fit(ExtremalMetric(3, 1.0, -2.0, 1.0)), DomainError);
}

TEST_CASE("cusp limit: exactly Einstein, fiber block included") {
    for (int n : {3, 4}) {
        const CohomOneMetric g = cusp_limit_metric(n, 1.0);
        for (double s : {-5.0, 0.0, 4.0}) {
            const CurvatureReport rep = ricci_cohom_one(g, s);
            CHECK(rep.einstein_residual < 1e-12);
            CHECK(rep.ricci_fiber == doctest::Approx(-static_cast<double>(n)).epsilon(1e-13));
            CHECK(rep.sectional.x_theta == doctest::Approx(-static_cast<double>(n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("toral cusp: constant curvature -1 and oracle agreement") {
    const CohomOneMetric g = toral_cusp_metric(3);
    const CurvatureReport rep = ricci_cohom_one(g, 0.7);
    for (double k : rep.sectional.as_array()) CHECK(k == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep.einstein_residual < 1e-12);
    CHECK(fd_ricci_oracle(g, 0.7, 1e-3).einstein_residual < 1e-5);
}

TEST_CASE("tube times fiber: Einstein product with K_surface = -n") {
    const CohomOneMetric g = tube_metric(3, 0.01, 6.0);
    for (double t : {-4.0, 0.0, 2.0}) {
        const CurvatureReport rep = ricci_cohom_one(g, t);
        CHECK(rep.einstein_residual < 1e-12);
        CHECK(rep.sectional.x_theta == doctest::Approx(-3.0).epsilon(1e-12));
    }
    // circle length alpha cosh(sqrt(n) t)
    CHECK(g.f.value(2.0) * g.theta_length ==
          doctest::Approx(0.01 * std::cosh(std::sqrt(3.0) * 2.0)).epsilon(1e-13));
}

TEST_CASE("curvature convergence to the cusp limit at rate sqrt(n)") {
    for (int n : {3, 4}) {
        const ExtremalMetric em(n, 1.0, -7.0, 1.0);
        const double slope = curvature_convergence_rate(em);
        const double sn = std::sqrt(static_cast<double>(n));
        CHECK(slope > sn * 0.95);
        CHECK(slope < sn * 1.05);
    }
    // monotone decay along the cusp
    const ExtremalMetric em(3, 1.0, -7.0, 1.0);
    auto dev = [&](double s) {
        const double r = em.r_of_s(s);
        const double v2 = bh::v_potential_d2(3, -1, em.mass(), r);
        return std::abs(-0.5 * v2 + 3.0);
    };
    CHECK(dev(-6.0) < dev(-4.0));
    CHECK_THROWS_AS(curvature_convergence_rate(ExtremalMetric(3, 1.0, -3.0, 1.0)), DomainError);
}

TEST_CASE("cutoff partition: values, symmetry, derivatives") {
    CHECK(cutoff_chi(-1.0).chi == 0.0);
    CHECK(cutoff_chi(2.0).chi == 1.0);
    CHECK(cutoff_chi(0.5).chi == doctest::Approx(0.5).epsilon(1e-14));
    for (double u : {0.2, 0.35, 0.7}) {
        CHECK(cutoff_chi(u).chi + cutoff_chi(1.0 - u).chi == doctest::Approx(1.0).epsilon(1e-14));
        const double d = 1e-6;
        const CutoffValue c = cutoff_chi(u);
        const double fd1 = (cutoff_chi(u + d).chi - cutoff_chi(u - d).chi) / (2.0 * d);
        const double fd2 = (cutoff_chi(u + d).chi - 2.0 * c.chi + cutoff_chi(u - d).chi) / (d * d);
        CHECK(fd1 == doctest::Approx(c.d1).epsilon(1e-7));
        CHECK(fd2 == doctest::Approx(c.d2).epsilon(1e-4));
    }
}

TEST_CASE("glue config: matched circle lengths and alpha decay") {
    const GlueConfig c = make_glue_config(3, 1.0, 3.0);
    const ExtremalMetric em(3, 1.0, -4.0, 0.0);
    const double sn = std::sqrt(3.0);
    CHECK(c.alpha * std::cosh(sn * 3.0) ==
          doctest::Approx(std::sqrt(em.v_of_s(-3.0)) * 1.0).epsilon(1e-12));
    // alpha(R) ~ e^{-2 sqrt(n) R}
    std::vector<double> Rs = {2.0, 3.0, 4.0, 5.0}, la;
    for (double R : Rs) la.push_back(std::log(make_glue_config(3, 1.0, R).alpha));
    const double slope = fit_line(Rs, la).slope;
    CHECK(slope > -2.0 * sn * 1.05);
    CHECK(slope < -2.0 * sn * 0.95);
    CHECK_THROWS_AS(make_glue_config(3, 1.0, 0.5, 1.0), ConfigError);
}

TEST_CASE("glued metric: seam matching and exact regions") {
    const GluedMetric gm = cce::glue::glue(make_glue_config(3, 1.0, 4.0));
    const double sn = std::sqrt(3.0);
    const double R = gm.config.R;

    // circle lengths agree at the seam by construction of alpha
    const double f_tube = gm.config.alpha * std::cosh(sn * R);
    const double f_ext = gm.config.beta * std::sqrt(gm.extremal->v_of_s(-R));
    CHECK(std::abs(f_tube - f_ext) < 1e-10 * f_tube);

    // h jump across the seam is e^{-sqrt(n) R} to leading order
    const double jump = std::abs(gm.extremal->r_of_s(-R) - bh::extremal_radius(3));
    CHECK(jump / std::exp(-sn * R) > 0.9);
    CHECK(jump / std::exp(-sn * R) < 1.1);

    // bitwise reduction to the exact pieces outside the collar
    for (double x : {0.5, 2.0, 3.49}) {
        CHECK(gm.metric.f.value(x) == gm.config.alpha * std::cosh(sn * x));
        CHECK(gm.metric.h.value(x) == bh::extremal_radius(3));
    }
    for (double x : {4.51, 6.0, 9.0}) {
        CHECK(gm.metric.f.value(x) ==
              gm.config.beta * std::sqrt(gm.extremal->v_of_s(x - 2.0 * R)));
        CHECK(gm.metric.h.value(x) == gm.extremal->r_of_s(x - 2.0 * R));
    }

    // Einstein outside the collar
    CHECK(gm.residual_sup_outside < 1e-8);
    CHECK(gm.residual_sup_collar > gm.residual_sup_outside);

    // blend is C^2: closed-form derivatives match finite differences inside the collar
    for (double x : {R - 0.3, R, R + 0.3}) {
        const double d = 1e-5;
        const double fd1 = (gm.metric.f.value(x + d) - gm.metric.f.value(x - d)) / (2.0 * d);
        const double fd2 =
            (gm.metric.f.value(x + d) - 2.0 * gm.metric.f.value(x) + gm.metric.f.value(x - d)) /
            (d * d);
        CHECK(fd1 == doctest::Approx(gm.metric.f.d1(x)).epsilon(1e-5));
        CHECK(fd2 == doctest::Approx(gm.metric.f.d2(x)).epsilon(1e-3));
    }
}

TEST_CASE("glued residual decays at rate sqrt(n)") {
    const DecayFit fit = residual_decay_fit(3, 1.0, {2.0, 3.0, 4.0, 5.0});
    const double sn = std::sqrt(3.0);
    CHECK(fit.slope > -sn * 1.10);
    CHECK(fit.slope < -sn * 0.90);
    REQUIRE(fit.residuals.size() == 4);
    CHECK(fit.residuals[3][1] < fit.residuals[1][1]); // R=5 below R=3
    CHECK_THROWS_AS(residual_decay_fit(3, 1.0, {2.0, 3.0, 4.0}), DomainError);
    CHECK_THROWS_AS(residual_decay_fit(3, 1.0, {2.0, 2.0, 3.0, 4.0}), DomainError);
}

TEST_CASE("fitted exponents are stable under tighter quadrature and denser sampling") {
    const ExtremalMetric coarse(3, 1.0, -7.0, 1.0, 1e-12);
    const ExtremalMetric fine(3, 1.0, -7.0, 1.0, 5e-13);
    const AsymptoticFit a1 = v_asymptotic_fit(coarse);
    const AsymptoticFit a2 = v_asymptotic_fit(fine);
    CHECK(a2.rate == doctest::Approx(a1.rate).epsilon(1e-6));
    CHECK(a2.amplitude == doctest::Approx(a1.amplitude).epsilon(1e-6));
    CHECK(curvature_convergence_rate(fine) ==
          doctest::Approx(curvature_convergence_rate(coarse)).epsilon(1e-6));

    GlueConfig dense = make_glue_config(3, 1.0, 3.0);
    const double sup_default = cce::glue::glue(dense).residual_sup_collar;
    dense.collar_samples *= 2;
    const double sup_dense = cce::glue::glue(dense).residual_sup_collar;
    CHECK(sup_dense == doctest::Approx(sup_default).epsilon(1e-3));
}
