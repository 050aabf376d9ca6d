#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "glrt/analytic.hpp"
#include "glrt/foxh.hpp"
#include "glrt/hypergeometric.hpp"

namespace {

glrt::FoxHProblem pd_problem(int m, double pfa, double upsilon,
                             double& omega) {
    omega = (m - 1.0) / glrt::threshold_for_pfa(pfa, m);
    return glrt::make_pd_foxh_problem(
        glrt::make_pd_foxh_inputs(m, upsilon, omega));
}

} // namespace

TEST_CASE("contour selection midpoints") {
    double omega = 0.0;
    const auto p50 = pd_problem(50, 1e-8, 0.1, omega);
    const auto xi50 = glrt::select_contours(p50);
    REQUIRE(xi50.size() == 2);
    CHECK(xi50[0] == Catch::Approx(24.5).epsilon(1e-14));
    CHECK(xi50[1] == Catch::Approx((50.0 - 24.5) / 2.0).epsilon(1e-14));
    const auto p2 = pd_problem(2, 1e-2, 0.1, omega);
    CHECK(glrt::select_contours(p2)[0] == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("contour selection rejects an empty region") {
    glrt::FoxHProblem p;
    p.x = {0.5};
    p.delta = {0.0, -5.0};
    p.dmat = {{1.0}, {-1.0}};
    CHECK_THROWS_AS(glrt::select_contours(p), glrt::InfeasibleContour);
}

TEST_CASE("univariate line contour reproduces the beta integral") {
    // (1/2 pi i) int Gamma(s) Gamma(a - s) x^{-s} ds = Gamma(a) (1+x)^{-a}
    for (double a : {2.5, 6.0})
        for (double x : {0.7, 2.5}) {
            glrt::FoxHProblem p;
            p.x = {x};
            p.delta = {0.0, a};
            p.dmat = {{1.0}, {-1.0}};
            const glrt::complex_t v = glrt::eval_bivariate_h(p, 1e-10);
            const double want =
                std::exp(glrt::log_gamma_real(a) - a * std::log1p(x));
            CHECK(v.real() == Catch::Approx(want).epsilon(1e-9));
            CHECK(std::abs(v.imag()) <= 1e-9 * want);
        }
}

TEST_CASE("univariate bent contour reproduces the confluent series") {
    // negative argument forces the left hairpin; the residue sum is
    // Gamma(c) 1F1(c; 1; v)
    for (double c : {25.5, 50.5})
        for (double v : {5.0, 25.05}) {
            glrt::FoxHProblem p;
            p.x = {-v};
            p.delta = {0.0, c};
            p.dmat = {{1.0}, {-1.0}};
            p.beta = {1.0};
            p.bmat = {{-1.0}};
            double logscale = 0.0;
            const glrt::complex_t h =
                glrt::eval_bivariate_h_scaled(p, 1e-11, logscale);
            const double log_h = std::log(std::abs(h)) + logscale;
            const double want = glrt::log_gamma_real(c) +
                                std::log(glrt::kummer_1f1(c, 1.0, v));
            CHECK(log_h == Catch::Approx(want).epsilon(1e-12));
            CHECK(std::abs(h.imag()) <= 1e-10 * std::abs(h.real()));
        }
}

TEST_CASE("detection probability via the contour integral") {
    // low and mid PD reference points; the full grid runs in the
    // acceptance suite
    {
        const auto op = glrt::make_operating_point(50, 1e-8, 0.1);
        const double pd_s = glrt::pd_series(op, 1e-10).pd;
        const auto in =
            glrt::make_pd_foxh_inputs(50, 0.1, 49.0 / op.gamma);
        glrt::FoxHStats stats;
        const double pd_h = glrt::pd_foxh(in, 1e-8, &stats);
        CHECK(std::abs(pd_h - pd_s) <= 1e-6);
        CHECK(pd_h == Catch::Approx(0.00106).margin(1e-5));
        CHECK(stats.branch_warnings == 0);
        CHECK(stats.max_ray_reach > 0.0);
    }
    {
        const double ups = std::pow(10.0, -0.5);
        const auto op = glrt::make_operating_point(50, 1e-6, ups);
        const auto in =
            glrt::make_pd_foxh_inputs(50, ups, 49.0 / op.gamma);
        CHECK(glrt::pd_foxh(in, 1e-8) ==
              Catch::Approx(0.52886).margin(1e-4));
    }
}

TEST_CASE("contour route at small SNR") {
    // accurate down to upsilon ~ 1e-3 for this operating point
    const auto op = glrt::make_operating_point(50, 1e-4, 1e-3);
    const auto in = glrt::make_pd_foxh_inputs(50, 1e-3, 49.0 / op.gamma);
    const double pd_s = glrt::pd_series(op, 1e-12).pd;
    CHECK(std::abs(glrt::pd_foxh(in, 1e-8) - pd_s) <= 1e-9);

    // far below that the second argument is too small for the contour
    // quadrature; the residual check reports the failure instead of
    // returning a silently wrong value
    const auto op0 = glrt::make_operating_point(50, 1e-4, 1e-6);
    const auto in0 = glrt::make_pd_foxh_inputs(50, 1e-6, 49.0 / op0.gamma);
    CHECK_THROWS_AS(glrt::pd_foxh(in0, 1e-8), glrt::ImaginaryResidue);
}

TEST_CASE("explicit contour offsets are honored") {
    const auto op = glrt::make_operating_point(50, 1e-8, 0.1);
    auto in = glrt::make_pd_foxh_inputs(50, 0.1, 49.0 / op.gamma);
    auto p = glrt::make_pd_foxh_problem(in);
    p.contour_offsets = {24.5, 12.75};
    double logscale = 0.0;
    const glrt::complex_t v =
        glrt::eval_bivariate_h_scaled(p, 1e-9, logscale);
    const double pd = std::exp(std::log(in.phi) + logscale) * v.real();
    CHECK(pd == Catch::Approx(0.00106281).margin(1e-5));
}

TEST_CASE("contour truncation is stable under doubling") {
    const auto op = glrt::make_operating_point(50, 1e-8, 0.1);
    const auto in = glrt::make_pd_foxh_inputs(50, 0.1, 49.0 / op.gamma);
    auto p = glrt::make_pd_foxh_problem(in);
    double ls1 = 0.0, ls2 = 0.0;
    const glrt::complex_t v1 = glrt::eval_bivariate_h_scaled(p, 1e-9, ls1);
    p.truncation = 200.0;
    const glrt::complex_t v2 = glrt::eval_bivariate_h_scaled(p, 1e-9, ls2);
    const double h1 = std::log(std::abs(v1.real())) + ls1;
    const double h2 = std::log(std::abs(v2.real())) + ls2;
    CHECK(std::abs(h1 - h2) <= 1e-9);
}
