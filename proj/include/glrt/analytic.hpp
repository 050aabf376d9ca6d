#ifndef GLRT_ANALYTIC_HPP
#define GLRT_ANALYTIC_HPP

#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "glrt/distributions.hpp"
#include "glrt/errors.hpp"
#include "glrt/hypergeometric.hpp"
#include "glrt/quadrature.hpp"

namespace glrt {

// An (M, PFA, Upsilon) triple with its derived threshold.  gamma and pfa stay
// consistent through the closed-form round trip; the threshold depends on
// neither N nor sigma^2.
struct OperatingPoint {
    int m;
    double pfa;
    double upsilon;
    double gamma;
};

struct SeriesReport {
    double pd;
    int terms_used;
    double bound_at_stop;
    std::chrono::duration<double> elapsed;
};

// PFA(gamma) = ((M-1)/(gamma+M-1))^(M-1).
inline double pfa_closed_form(double gamma, int m) {
    const double mm = static_cast<double>(m);
    return std::pow((mm - 1.0) / (gamma + mm - 1.0), mm - 1.0);
}

// gamma = 1 - M + (M-1) PFA^{1/(1-M)}; strictly decreasing in pfa.
inline double threshold_for_pfa(double pfa, int m) {
    if (pfa <= 0.0 || pfa > 1.0)
        throw DomainError("threshold_for_pfa: pfa outside (0,1]");
    const double mm = static_cast<double>(m);
    return (mm - 1.0) * (std::pow(pfa, 1.0 / (1.0 - mm)) - 1.0);
}

inline OperatingPoint make_operating_point(int m, double pfa, double upsilon) {
    return OperatingPoint{m, pfa, upsilon, threshold_for_pfa(pfa, m)};
}

// Detection probability by adaptive quadrature.  The semi-infinite integral
// over z is mapped to a finite one by u = (M-1)/(M+z-1), which turns the
// integrand into (M-1) u^{M-2} 1F1(M; 1; Upsilon M (1-u)) on (0, u_gamma].
inline double pd_quadrature(const OperatingPoint& op, double tol) {
    const double mm = static_cast<double>(op.m);
    const double um = op.upsilon * mm;
    const double u_gamma = (mm - 1.0) / (mm + op.gamma - 1.0);
    const auto integrand = [&](double u) -> double {
        if (u <= 0.0)
            return 0.0;
        const double log_f11 = std::log(kummer_1f1(mm, 1.0, um * (1.0 - u)));
        return (mm - 1.0) *
               std::exp((mm - 2.0) * std::log(u) - um + log_f11);
    };
    const double pd = integrate_adaptive(integrand, 0.0, u_gamma, tol);
    return pd < 0.0 ? 0.0 : (pd > 1.0 ? 1.0 : pd);
}

namespace detail {

// log of 2F1(M-1, M+t0; M; -Omega), shared by the series and its bound.
inline double log_tail_factor(int m, double omega, int t0) {
    return log_gauss_2f1_negx(m - 1.0, static_cast<double>(m + t0),
                              static_cast<double>(m), -omega);
}

inline double logsumexp(const std::vector<double>& logs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double l : logs)
        if (l > mx)
            mx = l;
    if (!std::isfinite(mx))
        return mx;
    double s = 0.0;
    for (double l : logs)
        s += std::exp(l - mx);
    return mx + std::log(s);
}

} // namespace detail

// Certified a-priori bound on the series tail beyond t0 terms:
//   Omega^{M-1} L_{M-1}(-M Upsilon) 2F1(M-1, M+t0; M; -Omega),
// monotone non-increasing in t0.
inline double truncation_bound(int m, double upsilon, double omega, int t0) {
    const double lag = laguerre(static_cast<unsigned>(m - 1),
                                -static_cast<double>(m) * upsilon);
    return std::exp((m - 1.0) * std::log(omega) + std::log(lag) +
                    detail::log_tail_factor(m, omega, t0));
}

// Detection probability by the residue series
//   PD = e^{-Upsilon M} Omega^{M-1} sum_k Gamma(k+M) (Upsilon M)^k /
//        Gamma(k+1)^2 * 2F1~(M-1, k+M; M; -Omega),
// with terms accumulated in log space.  The stopping rule is the certified
// tail bound above, sharpened by replacing the full Laguerre generating sum
// with the part of it not yet consumed: both factorizations bound the same
// tail, but the sharpened one stops markedly earlier without giving up the
// a-priori error guarantee.
inline SeriesReport pd_series(const OperatingPoint& op, double tol) {
    const auto t_start = std::chrono::steady_clock::now();
    const double mm = static_cast<double>(op.m);
    const double um = op.upsilon * mm;
    const double omega = (mm - 1.0) / op.gamma;
    const double log_omega_pow = (mm - 1.0) * std::log(omega);
    const double log_gamma_m = log_gamma_real(mm);
    const double log_um = um > 0.0 ? std::log(um) : 0.0;

    // full Laguerre generating sum: sum_k (UM)^k Gamma(k+M)/(Gamma(k+1)^2
    // Gamma(M)) = e^{UM} L_{M-1}(-UM)
    const double full_gen =
        std::exp(um) * laguerre(static_cast<unsigned>(op.m - 1), -um);

    // The per-term Gauss factor 2F1(M-1, M+k; M; -Omega) is, by the Pfaff
    // transformation, (1+Omega)^{-(M+k)} S(M+k) with S(q) = 2F1(1, q; M; y),
    // y = Omega/(1+Omega).  S grows like (1+Omega)^q, so it is the dominant
    // solution of the Gauss contiguous recurrence in q and the forward sweep
    // is stable; S(M) and S(M+1) have closed forms.  One recurrence step per
    // series term replaces a full hypergeometric summation.
    const double y = omega / (1.0 + omega);
    const double log1po = std::log1p(omega);
    double s_cur = 1.0 / (1.0 - y);                     // S(M+k), k = 0
    double s_next = s_cur + y * s_cur * s_cur / mm;     // S(M+k+1)
    double s_off = 0.0;

    std::vector<double> log_terms;
    double log_coeff = log_gamma_m; // log of Gamma(k+M) (UM)^k / Gamma(k+1)^2
    double partial_gen = 0.0;
    double bound_at_stop = 0.0;
    const int max_terms = 10000;
    for (int k = 0; k < max_terms; ++k) {
        if (k > 0)
            log_coeff += log_um + std::log(mm + k - 1.0) -
                         2.0 * std::log(static_cast<double>(k));
        const double log_f21_reg = -(mm + k) * log1po + std::log(s_cur) +
                                   s_off - log_gamma_m;
        log_terms.push_back(log_coeff + log_f21_reg);
        partial_gen += std::exp(log_coeff - log_gamma_m);

        const int t0 = k + 1;
        const double log_tail_next =
            -(mm + t0) * log1po + std::log(s_next) + s_off;
        double remainder = full_gen - partial_gen;
        if (remainder <= 0.0)
            remainder = 0.0;
        bound_at_stop =
            remainder == 0.0
                ? 0.0
                : std::exp(log_omega_pow - um + std::log(remainder) +
                           log_tail_next);
        if (bound_at_stop <= tol || um == 0.0) {
            double pd = std::exp(-um + log_omega_pow +
                                 detail::logsumexp(log_terms));
            pd = pd < 0.0 ? 0.0 : (pd > 1.0 ? 1.0 : pd);
            return SeriesReport{pd, t0, bound_at_stop,
                                std::chrono::steady_clock::now() - t_start};
        }

        const double q = mm + k + 1.0;
        const double s_follow = ((mm - q) * s_cur +
                                 (2.0 * q - mm + (1.0 - q) * y) * s_next) /
                                (q * (1.0 - y));
        s_cur = s_next;
        s_next = s_follow;
        if (s_next > 1e250) {
            s_cur *= 1e-250;
            s_next *= 1e-250;
            s_off += 250.0 * std::log(10.0);
        }
    }
    throw NonConvergence("pd_series: term cap exceeded");
}

// Extra SNR (dB) a detector needs over a reference to reach target_pd.
// Curves are (SNR_dB, PD) samples, monotone increasing in SNR.
using pd_curve = std::vector<std::pair<double, double>>;

namespace detail {

inline double crossing_db(const pd_curve& curve, double target_pd,
                          const char* what) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const auto& [x0, p0] = curve[i];
        const auto& [x1, p1] = curve[i + 1];
        if ((p0 <= target_pd && target_pd <= p1) ||
            (p1 <= target_pd && target_pd <= p0)) {
            if (p1 == p0)
                return x0;
            return x0 + (target_pd - p0) * (x1 - x0) / (p1 - p0);
        }
    }
    throw BracketError(std::string("snr_loss: target PD not bracketed by ") +
                       what + " curve");
}

} // namespace detail

inline double snr_loss(const pd_curve& detector_curve,
                       const pd_curve& reference_curve, double target_pd) {
    return detail::crossing_db(detector_curve, target_pd, "detector") -
           detail::crossing_db(reference_curve, target_pd, "reference");
}

} // namespace glrt

#endif
