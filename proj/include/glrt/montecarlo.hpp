#ifndef GLRT_MONTECARLO_HPP
#define GLRT_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "glrt/detectors.hpp"
#include "glrt/errors.hpp"
#include "glrt/rng.hpp"
#include "glrt/stats.hpp"

namespace glrt {

// Ground truth a simulation runs against.
struct Scenario {
    int n_antennas;
    int m_samples;
    std::vector<double> mu_x; // per-antenna in-phase echo means
    std::vector<double> mu_y;
    double sigma_sq; // per-component noise variance
    std::uint64_t seed;

    double mu_x_total() const {
        double s = 0.0;
        for (double v : mu_x)
            s += v;
        return s;
    }
    double mu_y_total() const {
        double s = 0.0;
        for (double v : mu_y)
            s += v;
        return s;
    }
    // aggregate SNR parameter (mu_x^2 + mu_y^2) / (2 N sigma^2)
    double upsilon() const {
        const double mx = mu_x_total();
        const double my = mu_y_total();
        return (mx * mx + my * my) / (2.0 * n_antennas * sigma_sq);
    }
    Scenario null_hypothesis() const {
        Scenario sc = *this;
        std::fill(sc.mu_x.begin(), sc.mu_x.end(), 0.0);
        std::fill(sc.mu_y.begin(), sc.mu_y.end(), 0.0);
        return sc;
    }
};

// Equal per-antenna SNR scenario: each antenna gets the same real-valued
// echo mean with snr_n = mu^2 / (2 sigma^2), so Upsilon = N snr_n.
inline Scenario make_equal_snr_scenario(int n_antennas, int m_samples,
                                        double snr_n_linear, double sigma_sq,
                                        std::uint64_t seed) {
    const double mu = std::sqrt(2.0 * sigma_sq * snr_n_linear);
    return Scenario{n_antennas, m_samples,
                    std::vector<double>(n_antennas, mu),
                    std::vector<double>(n_antennas, 0.0), sigma_sq, seed};
}

struct TrialReport {
    long long trials;
    long long detections;
    double rate;
    double ci_low;
    double ci_high;
    std::uint64_t seed;
    long long degenerate;
};

inline SnapshotMatrix generate_snapshot(const Scenario& sc,
                                        rng_stream& rng) {
    SnapshotMatrix s;
    s.n = sc.n_antennas;
    s.m = sc.m_samples;
    s.x.resize(static_cast<std::size_t>(s.n) * s.m);
    s.y.resize(static_cast<std::size_t>(s.n) * s.m);
    const double sd = std::sqrt(sc.sigma_sq);
    for (int a = 0; a < s.n; ++a)
        for (int k = 0; k < s.m; ++k) {
            s.xv(a, k) = sc.mu_x[a] + sd * rng.next_gaussian();
            s.yv(a, k) = sc.mu_y[a] + sd * rng.next_gaussian();
        }
    return s;
}

// Analog beamforming with unity gains and null phase shifts: column sums.
inline BeamformedVector beamform(const SnapshotMatrix& s) {
    BeamformedVector bv;
    bv.r.resize(s.m);
    for (int k = 0; k < s.m; ++k) {
        double re = 0.0, im = 0.0;
        for (int a = 0; a < s.n; ++a) {
            re += s.xv(a, k);
            im += s.yv(a, k);
        }
        bv.r[k] = {re, im};
    }
    return bv;
}

enum class DetectorKind { post_glrt, pre_glrt, square_law, lrt };

// A detector plus whatever side information it is allowed to use (the LRT
// reference knows the true parameters).
struct Detector {
    DetectorKind kind;
    double mu_x = 0.0;
    double mu_y = 0.0;
    double sigma_sq = 1.0;
};

inline Detector lrt_reference(const Scenario& sc) {
    return Detector{DetectorKind::lrt, sc.mu_x_total(), sc.mu_y_total(),
                    sc.sigma_sq};
}

inline double detector_statistic(const Detector& det,
                                 const SnapshotMatrix& snap) {
    switch (det.kind) {
    case DetectorKind::pre_glrt:
        return pre_glrt_statistic(snap);
    case DetectorKind::post_glrt:
        return post_glrt_statistic(beamform(snap), snap.n);
    case DetectorKind::square_law:
        return square_law_statistic(beamform(snap));
    case DetectorKind::lrt:
        return lrt_statistic(beamform(snap), det.mu_x, det.mu_y,
                             det.sigma_sq, snap.n);
    }
    throw DomainError("detector_statistic: unknown detector");
}

namespace detail {

// Trials are split over a fixed number of shards with per-shard RNG streams,
// so results do not depend on how many worker threads happen to run.
inline constexpr int mc_shards = 64;

template <class PerTrial>
void run_sharded(const Scenario& sc, long long trials, PerTrial&& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, mc_shards);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int shard = static_cast<int>(w); shard < mc_shards;
                 shard += static_cast<int>(workers)) {
                const long long lo = trials * shard / mc_shards;
                const long long hi = trials * (shard + 1) / mc_shards;
                rng_stream rng(shard_seed(sc.seed, shard));
                for (long long t = lo; t < hi; ++t)
                    body(shard, t, rng);
            }
        });
    for (auto& th : pool)
        th.join();
}

} // namespace detail

// Empirical detection (or false-alarm) rate of a detector at a threshold.
inline TrialReport estimate_rate(const Detector& det, double threshold,
                                 const Scenario& sc, long long trials) {
    if (trials < 1)
        throw DomainError("estimate_rate: trials < 1");
    std::vector<long long> hits(detail::mc_shards, 0);
    std::vector<long long> degen(detail::mc_shards, 0);
    detail::run_sharded(sc, trials,
                        [&](int shard, long long, rng_stream& rng) {
                            const SnapshotMatrix snap =
                                generate_snapshot(sc, rng);
                            try {
                                const double z =
                                    detector_statistic(det, snap);
                                if (decide(z, threshold) == Hypothesis::H1)
                                    ++hits[shard];
                            } catch (const DegenerateSample&) {
                                ++degen[shard];
                            }
                        });
    long long detections = 0, degenerate = 0;
    for (int i = 0; i < detail::mc_shards; ++i) {
        detections += hits[i];
        degenerate += degen[i];
    }
    const ProportionInterval ci = wilson_interval(detections, trials);
    return TrialReport{trials, detections, ci.rate, ci.low,
                       ci.high, sc.seed, degenerate};
}

// Empirical (1-pfa) quantile of the detector statistic under the supplied
// null scenario.
inline double calibrate_threshold(const Detector& det, double pfa,
                                  const Scenario& sc_h0, long long trials) {
    if (pfa <= 0.0 || pfa >= 1.0)
        throw DomainError("calibrate_threshold: pfa outside (0,1)");
    if (static_cast<double>(trials) * pfa < 100.0)
        throw InsufficientTrials(
            "calibrate_threshold: trials * pfa < 100");
    std::vector<double> stats(static_cast<std::size_t>(trials));
    detail::run_sharded(sc_h0, trials,
                        [&](int, long long t, rng_stream& rng) {
                            const SnapshotMatrix snap =
                                generate_snapshot(sc_h0, rng);
                            stats[static_cast<std::size_t>(t)] =
                                detector_statistic(det, snap);
                        });
    const std::size_t k = static_cast<std::size_t>(
        std::ceil((1.0 - pfa) * static_cast<double>(trials))) - 1;
    std::nth_element(stats.begin(), stats.begin() + k, stats.end());
    return stats[k];
}

// ---------------------------------------------------------------------------
// Statistical checks of the quadratic-form decomposition Z = (M-1) I1 / I2
// ---------------------------------------------------------------------------

struct LemmaReport {
    // I2 = 2 M sigma1_hat^2 / sigma^2 against chi-squared 2(M-1)
    double i2_h0_ks_p;
    double i2_h1_ks_p;
    double i2_cross_ks_p; // two-sample, H0 draws vs H1 draws
    // I1 = M (mu_x_hat^2 + mu_y_hat^2) / (N sigma^2) against chi-squared 2
    // under H0 and its noncentral version under H1
    double i1_h0_ks_p;
    double i1_h1_ks_p;
    // independence of (I1, I2)
    double corr_h0;
    double corr_h1;
    double rank_corr_h0;
    double rank_corr_h1;
    long long trials;
};

namespace detail {

inline void sample_quadratic_forms(const Scenario& sc, long long trials,
                                   std::vector<double>& i1,
                                   std::vector<double>& i2) {
    i1.resize(static_cast<std::size_t>(trials));
    i2.resize(static_cast<std::size_t>(trials));
    run_sharded(sc, trials, [&](int, long long t, rng_stream& rng) {
        const SnapshotMatrix snap = generate_snapshot(sc, rng);
        const BeamformedVector bv = beamform(snap);
        const MleSet e = mle_estimates(bv, sc.n_antennas);
        const double m = static_cast<double>(sc.m_samples);
        i1[static_cast<std::size_t>(t)] =
            m * (e.mu_x_hat * e.mu_x_hat + e.mu_y_hat * e.mu_y_hat) /
            (sc.n_antennas * sc.sigma_sq);
        i2[static_cast<std::size_t>(t)] =
            2.0 * m * e.sigma1_sq_hat / sc.sigma_sq;
    });
}

} // namespace detail

inline LemmaReport lemma_tests(const Scenario& sc, long long trials) {
    if (trials < 10000)
        throw DomainError("lemma_tests: trials < 1e4");
    const Scenario sc0 = sc.null_hypothesis();
    std::vector<double> i1_h0, i2_h0, i1_h1, i2_h1;
    detail::sample_quadratic_forms(sc0, trials, i1_h0, i2_h0);
    detail::sample_quadratic_forms(sc, trials, i1_h1, i2_h1);

    const int dof2 = 2 * (sc.m_samples - 1);
    const auto chi2_ref = [dof2](double v) { return chi2_cdf(v, dof2); };
    const auto chi2_2 = [](double v) { return chi2_cdf(v, 2); };
    const double mx = sc.mu_x_total();
    const double my = sc.mu_y_total();
    const double lambda1 =
        sc.m_samples * (mx * mx + my * my) / (sc.n_antennas * sc.sigma_sq);
    const auto ncx2_ref = [lambda1](double v) {
        return noncentral_chi2_cdf(v, 2, lambda1);
    };

    const double n = static_cast<double>(trials);
    LemmaReport rep{};
    rep.trials = trials;
    rep.i2_h0_ks_p = ks_pvalue(ks_statistic(i2_h0, chi2_ref), n);
    rep.i2_h1_ks_p = ks_pvalue(ks_statistic(i2_h1, chi2_ref), n);
    rep.i2_cross_ks_p = ks_two_sample_pvalue(
        ks_two_sample_statistic(i2_h0, i2_h1), i2_h0.size(), i2_h1.size());
    rep.i1_h0_ks_p = ks_pvalue(ks_statistic(i1_h0, chi2_2), n);
    rep.i1_h1_ks_p = ks_pvalue(ks_statistic(i1_h1, ncx2_ref), n);
    rep.corr_h0 = pearson_correlation(i1_h0, i2_h0);
    rep.corr_h1 = pearson_correlation(i1_h1, i2_h1);
    rep.rank_corr_h0 = spearman_correlation(i1_h0, i2_h0);
    rep.rank_corr_h1 = spearman_correlation(i1_h1, i2_h1);
    return rep;
}

} // namespace glrt

#endif
