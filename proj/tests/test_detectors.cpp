#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "glrt/analytic.hpp"
#include "glrt/detectors.hpp"
#include "glrt/rng.hpp"

namespace {

glrt::BeamformedVector random_vector(int m, glrt::rng_stream& rng,
                                     double mean = 0.4) {
    glrt::BeamformedVector bv;
    for (int k = 0; k < m; ++k)
        bv.r.emplace_back(mean + rng.next_gaussian(), rng.next_gaussian());
    return bv;
}

} // namespace

TEST_CASE("ML estimates") {
    glrt::BeamformedVector zeros;
    zeros.r.assign(8, {0.0, 0.0});
    CHECK_THROWS_AS(glrt::mle_estimates(zeros, 3), glrt::DegenerateSample);

    glrt::BeamformedVector two;
    two.r = {{2.0, 0.0}, {0.0, 0.0}};
    const auto e = glrt::mle_estimates(two, 1);
    CHECK(e.mu_x_hat == 1.0);
    CHECK(e.mu_y_hat == 0.0);
    CHECK(e.sigma0_sq_hat == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(e.sigma1_sq_hat == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("noise decomposition identity") {
    glrt::rng_stream rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto bv = random_vector(12, rng);
        const auto e = glrt::mle_estimates(bv, 4);
        const double lhs = e.sigma0_sq_hat;
        const double rhs =
            e.sigma1_sq_hat +
            (e.mu_x_hat * e.mu_x_hat + e.mu_y_hat * e.mu_y_hat) / 8.0;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
    }
}

TEST_CASE("detection statistic fixed points") {
    glrt::BeamformedVector balanced;
    balanced.r = {{1.0, 0.0}, {-1.0, 0.0}};
    CHECK(glrt::post_glrt_statistic(balanced, 1) == 0.0);

    glrt::BeamformedVector two;
    two.r = {{2.0, 0.0}, {0.0, 0.0}};
    CHECK(glrt::post_glrt_statistic(two, 1) ==
          Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("detection statistic scale invariance") {
    glrt::rng_stream rng(7);
    for (double c : {0.001, 3.0, 1e6}) {
        const auto bv = random_vector(20, rng);
        auto scaled = bv;
        for (auto& v : scaled.r)
            v *= c;
        const double z0 = glrt::post_glrt_statistic(bv, 5);
        const double z1 = glrt::post_glrt_statistic(scaled, 5);
        CHECK(std::abs(z1 - z0) <= 1e-12 * z0);
    }
}

TEST_CASE("multichannel statistic") {
    glrt::SnapshotMatrix zeros;
    zeros.n = 2;
    zeros.m = 4;
    zeros.x.assign(8, 0.0);
    zeros.y.assign(8, 0.0);
    CHECK_THROWS_AS(glrt::pre_glrt_statistic(zeros), glrt::DegenerateSample);

    // zero per-antenna sample means give a zero statistic
    glrt::SnapshotMatrix s;
    s.n = 2;
    s.m = 2;
    s.x = {1.0, -1.0, 2.0, -2.0};
    s.y = {0.5, -0.5, 0.0, 0.0};
    CHECK(glrt::pre_glrt_statistic(s) == 0.0);

    // scale invariance
    glrt::rng_stream rng(11);
    glrt::SnapshotMatrix r;
    r.n = 3;
    r.m = 9;
    for (int i = 0; i < 27; ++i) {
        r.x.push_back(0.3 + rng.next_gaussian());
        r.y.push_back(rng.next_gaussian());
    }
    auto scaled = r;
    for (auto& v : scaled.x)
        v *= 77.0;
    for (auto& v : scaled.y)
        v *= 77.0;
    const double z0 = glrt::pre_glrt_statistic(r);
    CHECK(std::abs(glrt::pre_glrt_statistic(scaled) - z0) <= 1e-12 * z0);
}

TEST_CASE("multichannel analytic law") {
    // exact F(2N, 2N(M-1)) null law round trip and the noncentral
    // alternative at the N = 10 reference point
    const double thr = glrt::pre_glrt_threshold(1e-3, 15, 10);
    CHECK(glrt::f_sf(thr, 20, 280) == Catch::Approx(1e-3).epsilon(1e-8));
    const double snr = std::pow(10.0, -0.8);
    CHECK(glrt::pre_glrt_pd(1e-6, 15, 10, snr) ==
          Catch::Approx(0.40).margin(0.02));
}

TEST_CASE("energy detector") {
    glrt::BeamformedVector zeros;
    zeros.r.assign(3, {0.0, 0.0});
    CHECK(glrt::square_law_statistic(zeros) == 0.0);
    glrt::BeamformedVector one;
    one.r = {{3.0, 4.0}};
    CHECK(glrt::square_law_statistic(one) == 25.0);

    CHECK(glrt::square_law_threshold(1.0, 10, 4, 2.0) == 0.0);
    CHECK_THROWS_AS(glrt::square_law_threshold(0.0, 10, 4, 2.0),
                    glrt::DomainError);
    CHECK_THROWS_AS(glrt::square_law_threshold(1e-3, 10, 4, -1.0),
                    glrt::DomainError);
    // threshold consistency with the chi-squared null law
    const double thr = glrt::square_law_threshold(1e-4, 10, 4, 2.0);
    CHECK(glrt::chi2_sf(thr / 8.0, 20) == Catch::Approx(1e-4).epsilon(1e-8));
}

TEST_CASE("clairvoyant log ratio") {
    glrt::BeamformedVector bv;
    bv.r = {{1.0, 2.0}};
    CHECK(glrt::lrt_statistic(bv, 0.0, 0.0, 1.0, 1) == 0.0);
    // hand expansion of the single-sample ratio
    const double want =
        (2.0 * (0.5 * 1.0 + 0.3 * 2.0) - (0.25 + 0.09)) / (2.0 * 1.0 * 2.0);
    CHECK(glrt::lrt_statistic(bv, 0.5, 0.3, 2.0, 1) ==
          Catch::Approx(want).epsilon(1e-14));
    CHECK_THROWS_AS(glrt::lrt_statistic(bv, 0.5, 0.3, 0.0, 1),
                    glrt::DomainError);
    // under H0 the statistic is Gaussian(-M ups, 2 M ups): the threshold
    // reproduces the requested false-alarm rate
    const double ups = 0.4;
    const double thr = glrt::lrt_threshold(1e-3, 15, ups);
    CHECK(glrt::normal_sf((thr + 15.0 * ups) / std::sqrt(30.0 * ups)) ==
          Catch::Approx(1e-3).epsilon(1e-10));
}

TEST_CASE("decision rule") {
    CHECK(glrt::decide(0.0, 0.0) == glrt::Hypothesis::H0);
    CHECK(glrt::decide(1.0 + 1e-12, 1.0) == glrt::Hypothesis::H1);
    CHECK(glrt::decide(0.5, 1.0) == glrt::Hypothesis::H0);
}
