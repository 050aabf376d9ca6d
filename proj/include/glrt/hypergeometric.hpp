#ifndef GLRT_HYPERGEOMETRIC_HPP
#define GLRT_HYPERGEOMETRIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "glrt/complex_gamma.hpp"
#include "glrt/errors.hpp"

namespace glrt {

namespace detail {

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Kahan-compensated accumulator.
struct compensated_sum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace detail

// Confluent hypergeometric function 1F1(a; b; x).
//
// For x >= 0 and a > 0 every Taylor term is positive, so the plain series is
// cancellation-free; compensated summation keeps the roundoff at a few ulp
// even when the sum grows to ~1e14.  For x < 0 the Kummer transformation
// 1F1(a;b;x) = e^x 1F1(b-a;b;-x) moves the series back to positive argument.
inline double kummer_1f1(double a, double b, double x) {
    if (detail::is_nonpositive_integer(b))
        throw DomainError("kummer_1f1: b is a non-positive integer");
    if (x == 0.0)
        return 1.0;
    if (x < 0.0)
        return std::exp(x) * kummer_1f1(b - a, b, -x);
    detail::compensated_sum sum;
    double term = 1.0;
    sum.add(term);
    const int max_terms = 100000;
    for (int k = 0; k < max_terms; ++k) {
        term *= (a + k) * x / ((b + k) * (k + 1));
        sum.add(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum.s) && k > 2)
            return sum.s;
    }
    throw NonConvergence("kummer_1f1: series did not converge");
}

namespace detail {

// Sum_{j>=0} (p)_j (q)_j / ((c)_j j!) y^j for 0 <= y < 1, returned as a log
// plus an implicit positive sign.  Terms are assumed eventually decreasing;
// the running sum is rescaled when it threatens the double range.
inline double log_gauss_series(double p, double q, double c, double y) {
    double term = 1.0;
    double sum = 1.0;
    double log_offset = 0.0;
    const int max_terms = 200000;
    for (int j = 0; j < max_terms; ++j) {
        term *= (p + j) * (q + j) * y / ((c + j) * (j + 1));
        sum += term;
        if (sum > 1e250) {
            sum *= 1e-200;
            term *= 1e-200;
            log_offset += 200.0 * std::log(10.0);
        }
        if (std::abs(term) <= 1e-17 * sum && j > 2)
            return std::log(sum) + log_offset;
    }
    throw NonConvergence("gauss_2f1: series did not converge");
}

} // namespace detail

// log of the Gauss hypergeometric function 2F1(a,b;c;x) for x <= 0 with
// a > 0, b > 0, c > 0 (the function value is then positive).  Arguments
// x < -1 are mapped into the unit interval by the Pfaff transformation
//   2F1(a,b;c;x) = (1-x)^{-b} 2F1(c-a, b; c; x/(x-1)),
// applied on whichever of the two symmetric slots keeps every series term
// positive (c-a > 0 here), so the transformed series is cancellation-free.
inline double log_gauss_2f1_negx(double a, double b, double c, double x) {
    if (x > 0.0)
        throw DomainError("log_gauss_2f1_negx: requires x <= 0");
    if (a <= 0.0 || b <= 0.0 || c <= 0.0)
        throw DomainError("log_gauss_2f1_negx: requires positive parameters");
    if (x == 0.0)
        return 0.0;
    const double y = x / (x - 1.0); // in (0,1)
    if (c - a > 0.0)
        return -b * std::log1p(-x) + detail::log_gauss_series(c - a, b, c, y);
    if (c - b > 0.0)
        return -a * std::log1p(-x) + detail::log_gauss_series(a, c - b, c, y);
    throw DomainError("log_gauss_2f1_negx: no positive-term transformation");
}

// Regularized Gauss hypergeometric function 2F1(a,b;c;x) / Gamma(c), x < 1.
inline double gauss_2f1_regularized(double a, double b, double c, double x) {
    if (x >= 1.0)
        throw DomainError("gauss_2f1_regularized: requires x < 1");
    if (x == 0.0)
        return std::exp(-log_gamma_real(c));
    if (x < 0.0 && a > 0.0 && b > 0.0 && c > 0.0)
        return std::exp(log_gauss_2f1_negx(a, b, c, x) - log_gamma_real(c));
    // direct series; fine for |x| < 1 with moderate parameters
    detail::compensated_sum sum;
    double term = 1.0;
    sum.add(term);
    const int max_terms = 200000;
    for (int j = 0; j < max_terms; ++j) {
        term *= (a + j) * (b + j) * x / ((c + j) * (j + 1));
        sum.add(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum.s) && j > 2)
            return sum.s * std::exp(-log_gamma_real(c));
    }
    throw NonConvergence("gauss_2f1_regularized: series did not converge");
}

// Laguerre polynomial L_n(x) by the three-term recurrence
//   (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline double laguerre(unsigned n, double x) {
    if (n == 0)
        return 1.0;
    double lkm1 = 1.0;
    double lk = 1.0 - x;
    for (unsigned k = 1; k < n; ++k) {
        const double lkp1 =
            ((2.0 * k + 1.0 - x) * lk - static_cast<double>(k) * lkm1) /
            (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    return lk;
}

// Beta function, computed in log space.
inline double beta_fn(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw DomainError("beta_fn: requires positive arguments");
    return std::exp(log_gamma_real(a) + log_gamma_real(b) -
                    log_gamma_real(a + b));
}

} // namespace glrt

#endif
