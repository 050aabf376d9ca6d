#ifndef GLRT_STATS_HPP
#define GLRT_STATS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "glrt/errors.hpp"

namespace glrt {

// Wilson score interval for a binomial proportion.
struct ProportionInterval {
    double rate;
    double low;
    double high;
};

inline ProportionInterval wilson_interval(long long successes,
                                          long long trials,
                                          double z = 1.959963984540054) {
    if (trials <= 0)
        throw DomainError("wilson_interval: trials <= 0");
    const double n = static_cast<double>(trials);
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return ProportionInterval{p, std::max(0.0, center - half),
                              std::min(1.0, center + half)};
}

// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
// Sorts a copy of the sample.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

// Asymptotic Kolmogorov distribution tail, with the usual finite-sample
// effective-size correction.
inline double ks_pvalue(double d, double n_effective) {
    const double rn = std::sqrt(n_effective);
    const double lambda = (rn + 0.12 + 0.11 / rn) * d;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18)
            break;
    }
    return std::max(0.0, std::min(1.0, 2.0 * sum));
}

// Two-sample KS statistic.
inline double ks_two_sample_statistic(std::vector<double> a,
                                      std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

inline double ks_two_sample_pvalue(double d, std::size_t na, std::size_t nb) {
    const double n_eff = static_cast<double>(na) * nb / (na + nb);
    return ks_pvalue(d, n_eff);
}

inline double pearson_correlation(const std::vector<double>& a,
                                  const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw DomainError("pearson_correlation: bad sizes");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return sab / std::sqrt(saa * sbb);
}

inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t pos = 0; pos < idx.size(); ++pos)
        r[idx[pos]] = static_cast<double>(pos + 1);
    return r;
}

inline double spearman_correlation(const std::vector<double>& a,
                                   const std::vector<double>& b) {
    return pearson_correlation(ranks(a), ranks(b));
}

} // namespace glrt

#endif
