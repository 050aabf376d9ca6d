#ifndef GLRT_DISTRIBUTIONS_HPP
#define GLRT_DISTRIBUTIONS_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "glrt/errors.hpp"
#include "glrt/hypergeometric.hpp"

namespace glrt {

// ---------------------------------------------------------------------------
// Law descriptors for the detection statistic Z
// ---------------------------------------------------------------------------

// Null-hypothesis law of Z: central F with (2, 2(M-1)) dof after scaling.
struct H0Law {
    int m; // number of post-beamforming samples, M >= 2
};

// Alternative-hypothesis law of Z: doubly noncentral F specialization with
// aggregate SNR parameter upsilon = (mu_x^2 + mu_y^2) / (2 N sigma^2).
struct H1Law {
    int m;
    double upsilon;
};

// General doubly noncentral F law (test oracle; lambda2 = 0 in the H1 case).
struct DoublyNoncentralF {
    int alpha1;
    int alpha2;
    double lambda1;
    double lambda2;
};

// ---------------------------------------------------------------------------
// Incomplete gamma / beta machinery
// ---------------------------------------------------------------------------

namespace detail {

// Regularized lower incomplete gamma P(a,x): series for x < a+1, continued
// fraction (modified Lentz) otherwise.
inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw DomainError("gamma_p: requires x >= 0, a > 0");
    if (x == 0.0)
        return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 10000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16)
                return sum * std::exp(-x + a * std::log(x) - lg);
        }
        throw NonConvergence("gamma_p: series failed");
    }
    // Q(a,x) by continued fraction, then P = 1 - Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            const double q = std::exp(-x + a * std::log(x) - lg) * h;
            return 1.0 - q;
        }
    }
    throw NonConvergence("gamma_p: continued fraction failed");
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Continued fraction for the regularized incomplete beta function.
inline double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h;
    }
    throw NonConvergence("betacf: continued fraction failed");
}

// Regularized incomplete beta I_x(a,b).
inline double beta_inc(double a, double b, double x) {
    if (x < 0.0 || x > 1.0)
        throw DomainError("beta_inc: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbeta =
        std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Chi-squared family
// ---------------------------------------------------------------------------

inline double chi2_cdf(double x, int dof) {
    if (x < 0.0)
        throw DomainError("chi2_cdf: x < 0");
    if (dof <= 0)
        throw DomainError("chi2_cdf: dof <= 0");
    return detail::gamma_p(0.5 * dof, 0.5 * x);
}

inline double chi2_sf(double x, int dof) {
    if (x < 0.0)
        throw DomainError("chi2_sf: x < 0");
    return detail::gamma_q(0.5 * dof, 0.5 * x);
}

// Noncentral chi-squared CDF as a Poisson mixture of central laws, with the
// Poisson weights handled in log space so large lambda does not underflow.
inline double noncentral_chi2_cdf(double x, int dof, double lambda) {
    if (x < 0.0)
        throw DomainError("noncentral_chi2_cdf: x < 0");
    if (lambda < 0.0)
        throw DomainError("noncentral_chi2_cdf: lambda < 0");
    if (lambda == 0.0)
        return chi2_cdf(x, dof);
    const double half = 0.5 * lambda;
    const long center = static_cast<long>(half);
    double sum = 0.0;
    // sweep outward from the modal Poisson weight until both tails are dead
    for (int dir = 0; dir < 2; ++dir) {
        for (long j = dir == 0 ? center : center + 1;; j += dir == 0 ? -1 : 1) {
            if (j < 0)
                break;
            const double logw =
                -half + j * std::log(half) - std::lgamma(j + 1.0);
            const double w = std::exp(logw);
            const double term = w * chi2_cdf(x, dof + 2 * static_cast<int>(j));
            sum += term;
            if (term < 1e-18 * (sum + 1e-300) || j > center + 4000)
                break;
            if (dir == 0 && j == 0)
                break;
        }
    }
    return std::min(sum, 1.0);
}

inline double noncentral_chi2_sf(double x, int dof, double lambda) {
    return 1.0 - noncentral_chi2_cdf(x, dof, lambda);
}

// Inverse survival function of the central chi-squared law (bisection).
inline double chi2_isf(double p, int dof) {
    if (p <= 0.0 || p > 1.0)
        throw DomainError("chi2_isf: p outside (0,1]");
    if (p == 1.0)
        return 0.0;
    double lo = 0.0;
    double hi = static_cast<double>(dof);
    while (chi2_sf(hi, dof) > p)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_sf(mid, dof) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Central / noncentral F
// ---------------------------------------------------------------------------

inline double f_cdf(double t, int d1, int d2) {
    if (t <= 0.0)
        return 0.0;
    const double c = t * d1 / static_cast<double>(d2);
    return detail::beta_inc(0.5 * d1, 0.5 * d2, c / (1.0 + c));
}

inline double f_sf(double t, int d1, int d2) { return 1.0 - f_cdf(t, d1, d2); }

inline double f_isf(double p, int d1, int d2) {
    if (p <= 0.0 || p > 1.0)
        throw DomainError("f_isf: p outside (0,1]");
    if (p == 1.0)
        return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (f_sf(hi, d1, d2) > p)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_sf(mid, d1, d2) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Survival of the singly noncentral F (numerator noncentrality lambda).
inline double noncentral_f_sf(double t, int d1, int d2, double lambda) {
    if (t <= 0.0)
        return 1.0;
    if (lambda < 0.0)
        throw DomainError("noncentral_f_sf: lambda < 0");
    const double c = t * d1 / static_cast<double>(d2);
    const double xv = c / (1.0 + c);
    const double half = 0.5 * lambda;
    const long center = lambda == 0.0 ? 0 : static_cast<long>(half);
    double sum = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
        for (long j = dir == 0 ? center : center + 1;; j += dir == 0 ? -1 : 1) {
            if (j < 0)
                break;
            const double logw = lambda == 0.0 && j == 0
                                    ? 0.0
                                    : -half + j * std::log(half) -
                                          std::lgamma(j + 1.0);
            const double w = std::exp(logw);
            const double term =
                w * (1.0 - detail::beta_inc(0.5 * d1 + j, 0.5 * d2, xv));
            sum += term;
            if (w < 1e-18 || j > center + 4000)
                break;
            if (dir == 0 && j == 0)
                break;
            if (lambda == 0.0)
                break;
        }
        if (lambda == 0.0)
            break;
    }
    return std::min(sum, 1.0);
}

// ---------------------------------------------------------------------------
// Densities of the detection statistic
// ---------------------------------------------------------------------------

// f_Z(z | H0) = ((M-1)/(M+z-1))^M.
inline double pdf_h0(double z, const H0Law& law) {
    if (z < 0.0)
        throw DomainError("pdf_h0: z < 0");
    const double m = static_cast<double>(law.m);
    return std::pow((m - 1.0) / (m + z - 1.0), m);
}

// f_Z(z | H1) = exp(-Upsilon M) f_Z(z|H0) 1F1(M; 1; Upsilon z M / (M+z-1)).
inline double pdf_h1(double z, const H1Law& law) {
    if (z < 0.0)
        throw DomainError("pdf_h1: z < 0");
    if (law.upsilon == 0.0)
        return pdf_h0(z, H0Law{law.m});
    const double m = static_cast<double>(law.m);
    const double arg = law.upsilon * z * m / (m + z - 1.0);
    // keep the exponential factor and the (possibly huge) 1F1 in log space
    const double log_body =
        m * (std::log(m - 1.0) - std::log(m + z - 1.0)) +
        std::log(kummer_1f1(m, 1.0, arg));
    return std::exp(-law.upsilon * m + log_body);
}

// Doubly noncentral F density as the Poisson-mixture double series, summed
// over diagonal shells k+l = s with a relative tail threshold of 1e-14 and a
// hard cap of 1e4 shells.
inline double doubly_noncentral_f_pdf(double z, const DoublyNoncentralF& law) {
    if (z < 0.0)
        throw DomainError("doubly_noncentral_f_pdf: z < 0");
    if (law.alpha1 <= 0 || law.alpha2 <= 0)
        throw DomainError("doubly_noncentral_f_pdf: dof <= 0");
    if (law.lambda1 < 0.0 || law.lambda2 < 0.0)
        throw DomainError("doubly_noncentral_f_pdf: lambda < 0");
    const double a1 = law.alpha1;
    const double a2 = law.alpha2;
    const double h1 = 0.5 * law.lambda1;
    const double h2 = 0.5 * law.lambda2;
    const double ratio = a1 * z / a2;
    const double log_ratio = z > 0.0 ? std::log(ratio) : 0.0;
    const double log_1p_ratio = std::log1p(ratio);
    double sum = 0.0;
    for (int s = 0; s < 10000; ++s) {
        double shell = 0.0;
        for (int k = 0; k <= s; ++k) {
            const int l = s - k;
            if ((h1 == 0.0 && k > 0) || (h2 == 0.0 && l > 0))
                continue;
            const double a = 0.5 * a1 + k;
            const double b = 0.5 * a2 + l;
            double logw = -h1 - h2;
            if (k > 0)
                logw += k * std::log(h1) - std::lgamma(k + 1.0);
            if (l > 0)
                logw += l * std::log(h2) - std::lgamma(l + 1.0);
            if (z == 0.0 && a != 1.0)
                continue; // z^{a-1} vanishes (a>1) on the shell
            const double log_density =
                std::log(a1 / a2) + (a - 1.0) * log_ratio -
                (a + b) * log_1p_ratio -
                (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
            shell += std::exp(logw + log_density);
        }
        sum += shell;
        if (s > 2 && shell < 1e-14 * (sum + 1e-300))
            return sum;
    }
    throw NonConvergence("doubly_noncentral_f_pdf: shell cap exceeded");
}

// ---------------------------------------------------------------------------
// Normal law helpers (used by confidence intervals and the LRT reference)
// ---------------------------------------------------------------------------

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_sf(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Inverse of normal_sf, by bisection refined with Newton steps.
inline double normal_isf(double p) {
    if (p <= 0.0 || p >= 1.0)
        throw DomainError("normal_isf: p outside (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_sf(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double fx = normal_sf(x) - p;
        const double dfx =
            -std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        x -= fx / dfx;
    }
    return x;
}

} // namespace glrt

#endif
