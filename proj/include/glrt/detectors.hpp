#ifndef GLRT_DETECTORS_HPP
#define GLRT_DETECTORS_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "glrt/distributions.hpp"
#include "glrt/errors.hpp"

namespace glrt {

// Post-beamforming samples R_m = sum_n (X_{n,m} + j Y_{n,m}).
struct BeamformedVector {
    std::vector<std::complex<double>> r;
};

// Per-antenna in-phase and quadrature samples, N rows by M columns.
struct SnapshotMatrix {
    int n; // antennas
    int m; // samples per antenna
    std::vector<double> x; // row-major N x M
    std::vector<double> y;
    double& xv(int a, int s) { return x[a * m + s]; }
    double& yv(int a, int s) { return y[a * m + s]; }
    double xv(int a, int s) const { return x[a * m + s]; }
    double yv(int a, int s) const { return y[a * m + s]; }
};

struct MleSet {
    double mu_x_hat;
    double mu_y_hat;
    double sigma0_sq_hat; // noise power estimate under H0
    double sigma1_sq_hat; // noise power estimate under H1
};

enum class Hypothesis { H0, H1 };

// ML estimates from the beamformed vector:
//   mu_x = mean(Re r), mu_y = mean(Im r),
//   sigma0^2 = (1/2MN) sum |r|^2,
//   sigma1^2 = sigma0^2 - (mu_x^2 + mu_y^2)/(2N).
inline MleSet mle_estimates(const BeamformedVector& bv, int n_antennas) {
    const std::size_t m = bv.r.size();
    if (m < 2)
        throw DomainError("mle_estimates: need at least two samples");
    double sx = 0.0, sy = 0.0, se = 0.0;
    for (const auto& c : bv.r) {
        sx += c.real();
        sy += c.imag();
        se += std::norm(c);
    }
    const double mu_x = sx / m;
    const double mu_y = sy / m;
    const double s0 = se / (2.0 * m * n_antennas);
    const double s1 = s0 - (mu_x * mu_x + mu_y * mu_y) / (2.0 * n_antennas);
    if (s1 <= 0.0)
        throw DegenerateSample("mle_estimates: zero residual variance");
    return MleSet{mu_x, mu_y, s0, s1};
}

// Z = Psi (mu_x^2 + mu_y^2) / sigma1^2 with Psi = (M-1)/(2N).  Invariant to
// positive rescaling of the samples.
inline double post_glrt_statistic(const BeamformedVector& bv,
                                  int n_antennas) {
    const MleSet e = mle_estimates(bv, n_antennas);
    const double m = static_cast<double>(bv.r.size());
    const double psi = (m - 1.0) / (2.0 * n_antennas);
    return psi * (e.mu_x_hat * e.mu_x_hat + e.mu_y_hat * e.mu_y_hat) /
           e.sigma1_sq_hat;
}

// GLRT on the raw snapshot: per-antenna unknown complex means, shared
// unknown noise variance.  With
//   num   = M sum_n (mean_x_n^2 + mean_y_n^2)        (2N dof under H0)
//   resid = sum_{n,m} deviations^2                   (2N(M-1) dof)
// the statistic (M-1) num / resid is F(2N, 2N(M-1)) under H0, so its null
// law is parameter-free and the value is scale-invariant.
inline double pre_glrt_statistic(const SnapshotMatrix& s,
                                 double noise_floor_guard = 0.0) {
    if (s.m < 2)
        throw DomainError("pre_glrt_statistic: need at least two samples");
    double num = 0.0;
    double resid = 0.0;
    for (int a = 0; a < s.n; ++a) {
        double mx = 0.0, my = 0.0;
        for (int k = 0; k < s.m; ++k) {
            mx += s.xv(a, k);
            my += s.yv(a, k);
        }
        mx /= s.m;
        my /= s.m;
        num += s.m * (mx * mx + my * my);
        for (int k = 0; k < s.m; ++k) {
            const double dx = s.xv(a, k) - mx;
            const double dy = s.yv(a, k) - my;
            resid += dx * dx + dy * dy;
        }
    }
    if (resid <= noise_floor_guard)
        throw DegenerateSample("pre_glrt_statistic: zero pooled residual "
                               "variance");
    return (s.m - 1.0) * num / resid;
}

// Analytic companions of the pre-beamforming GLRT: exact F(2N, 2N(M-1))
// null law, noncentral F under H1 with lambda = 2 M N snr_n.
inline double pre_glrt_threshold(double pfa, int m, int n_antennas) {
    return f_isf(pfa, 2 * n_antennas, 2 * n_antennas * (m - 1));
}

inline double pre_glrt_pd(double pfa, int m, int n_antennas, double snr_n) {
    const double thr = pre_glrt_threshold(pfa, m, n_antennas);
    const double lambda = 2.0 * m * n_antennas * snr_n;
    return noncentral_f_sf(thr, 2 * n_antennas, 2 * n_antennas * (m - 1),
                           lambda);
}

// Energy detector on the beamformed samples.
inline double square_law_statistic(const BeamformedVector& bv) {
    double e = 0.0;
    for (const auto& c : bv.r)
        e += std::norm(c);
    return e;
}

// Threshold set from the known noise power: the statistic over N sigma^2 is
// chi-squared with 2M dof under H0.
inline double square_law_threshold(double pfa, int m, int n_antennas,
                                   double sigma_sq) {
    if (pfa <= 0.0 || pfa > 1.0)
        throw DomainError("square_law_threshold: pfa outside (0,1]");
    if (sigma_sq <= 0.0)
        throw DomainError("square_law_threshold: sigma_sq <= 0");
    if (pfa == 1.0)
        return 0.0;
    return n_antennas * sigma_sq * chi2_isf(pfa, 2 * m);
}

// Analytic PD of the square-law detector: noncentral chi-squared survival
// with lambda = 2 M Upsilon on the same scale.
inline double square_law_pd(double pfa, int m, double upsilon) {
    const double thr = chi2_isf(pfa, 2 * m);
    return noncentral_chi2_sf(thr, 2 * m, 2.0 * m * upsilon);
}

// Log-likelihood ratio with all parameters known; reference detector only.
inline double lrt_statistic(const BeamformedVector& bv, double mu_x,
                            double mu_y, double sigma_sq, int n_antennas) {
    if (sigma_sq <= 0.0)
        throw DomainError("lrt_statistic: sigma_sq <= 0");
    const double inv = 1.0 / (2.0 * n_antennas * sigma_sq);
    double acc = 0.0;
    for (const auto& c : bv.r)
        acc += 2.0 * (mu_x * c.real() + mu_y * c.imag()) -
               (mu_x * mu_x + mu_y * mu_y);
    return acc * inv;
}

// Analytic PD of the LRT reference: the log-ratio is Gaussian under both
// hypotheses with deflection sqrt(2 M Upsilon).
inline double lrt_pd(double pfa, int m, double upsilon) {
    if (pfa <= 0.0 || pfa >= 1.0)
        throw DomainError("lrt_pd: pfa outside (0,1)");
    return normal_sf(normal_isf(pfa) - std::sqrt(2.0 * m * upsilon));
}

// Matching threshold on the log-ratio scale: under H0 the statistic is
// Gaussian with mean -M Upsilon and variance 2 M Upsilon.
inline double lrt_threshold(double pfa, int m, double upsilon) {
    if (pfa <= 0.0 || pfa >= 1.0)
        throw DomainError("lrt_threshold: pfa outside (0,1)");
    const double mu = static_cast<double>(m) * upsilon;
    return -mu + std::sqrt(2.0 * mu) * normal_isf(pfa);
}

// Decision rule: declare H1 iff the statistic strictly exceeds the
// threshold; ties resolve to H0.
inline Hypothesis decide(double statistic, double threshold) {
    return statistic > threshold ? Hypothesis::H1 : Hypothesis::H0;
}

} // namespace glrt

#endif
