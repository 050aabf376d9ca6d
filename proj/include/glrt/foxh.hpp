#ifndef GLRT_FOXH_HPP
#define GLRT_FOXH_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "glrt/complex_gamma.hpp"
#include "glrt/errors.hpp"
#include "glrt/quadrature.hpp"

namespace glrt {

// A (possibly multivariate, here L <= 2) Mellin-Barnes integrand
//   Theta(s) = prod_i Gamma(delta_i + sum_k d_ik s_k) /
//              prod_i Gamma(beta_i + sum_k b_ik s_k)
// integrated against x^{-s} along one contour per variable.
struct FoxHProblem {
    std::vector<double> x;                 // L arguments, possibly negative
    std::vector<double> delta;             // numerator gamma offsets
    std::vector<std::vector<double>> dmat; // numerator coefficients, rows x L
    std::vector<double> beta;              // denominator gamma offsets
    std::vector<std::vector<double>> bmat; // denominator coefficients
    std::vector<double> contour_offsets;   // xi_k; empty means auto-select
    double truncation = 100.0;             // W, straight-contour half-length
};

struct FoxHStats {
    int branch_warnings = 0;   // kernel log-scale excursions past exp range
    double max_ray_reach = 0.0; // deepest bent-contour extension used
};

// Vertical-contour abscissae: for each variable, the inequalities
// delta_i + sum_k d_ik xi_k > 0 (numerator poles kept left of the contour)
// are solved sequentially and the midpoint of each feasible interval is
// taken; one-sided intervals fall back to unit clearance from the bound.
inline std::vector<double> select_contours(const FoxHProblem& p) {
    const std::size_t L = p.x.size();
    std::vector<double> xi(L, 0.0);
    for (std::size_t k = 0; k < L; ++k) {
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p.delta.size(); ++i) {
            const auto& row = p.dmat[i];
            if (row[k] == 0.0)
                continue;
            bool later = false;
            for (std::size_t l = k + 1; l < L; ++l)
                if (row[l] != 0.0)
                    later = true;
            if (later)
                continue;
            double rhs = p.delta[i];
            for (std::size_t l = 0; l < k; ++l)
                rhs += row[l] * xi[l];
            const double bound = -rhs / row[k];
            if (row[k] > 0.0)
                lower = std::max(lower, bound);
            else
                upper = std::min(upper, bound);
        }
        if (lower >= upper)
            throw InfeasibleContour("select_contours: empty feasible "
                                    "interval");
        if (std::isfinite(lower) && std::isfinite(upper))
            xi[k] = 0.5 * (lower + upper);
        else if (std::isfinite(lower))
            xi[k] = lower + 1.0;
        else if (std::isfinite(upper))
            xi[k] = upper - 1.0;
        else
            xi[k] = 0.0;
    }
    return xi;
}

namespace detail {

class h_evaluator {
public:
    h_evaluator(const FoxHProblem& p, std::vector<double> xi, double rel_tol,
                FoxHStats* stats, bool optimize_lines)
        : p_(p), xi_(std::move(xi)), rel_tol_(rel_tol), stats_(stats),
          L_(static_cast<int>(p.x.size())) {
        // principal-branch logarithm of each argument
        for (double xv : p_.x)
            logx_.push_back(xv < 0.0 ? complex_t(std::log(-xv), M_PI)
                                     : complex_t(std::log(xv), 0.0));
        classify_contours();
        rescale();
        if (optimize_lines)
            refine_line_offsets();
    }

    // value such that H = result * exp(logscale)
    complex_t eval(double& logscale) {
        std::array<complex_t, 2> s{};
        complex_t v = integrate_var(0, s);
        logscale = scale_;
        return v;
    }

private:
    enum class contour_kind { line, hairpin_left };

    const FoxHProblem& p_;
    std::vector<double> xi_;
    double rel_tol_;
    FoxHStats* stats_;
    int L_;
    std::vector<complex_t> logx_;
    std::vector<contour_kind> kind_;
    double scale_ = 0.0;

    static constexpr double hairpin_height = 2.0;
    static constexpr double panel_width = 4.0;
    static constexpr double dead_band = 70.0; // nats below peak = negligible

    // A straight vertical contour for variable k converges iff the Stirling
    // decay of the gamma ratio, (pi/2) (sum |d_ik| - sum |b_ik|), exceeds
    // |arg x_k|.  Otherwise the contour is bent into a left-opening hairpin
    // around the poles of the Gamma(s_k)-type factors, which converges when
    // the net leftward gamma growth sum d_ik - sum b_ik is positive (the
    // residues it picks up are exactly the series expansion of the integral).
    void classify_contours() {
        for (int k = 0; k < L_; ++k) {
            double abs_num = 0.0, abs_den = 0.0;
            double net = 0.0;
            for (const auto& row : p_.dmat) {
                abs_num += std::abs(row[k]);
                net += row[k];
            }
            for (const auto& row : p_.bmat) {
                abs_den += std::abs(row[k]);
                net -= row[k];
            }
            const double decay = 0.5 * M_PI * (abs_num - abs_den);
            const double need = std::abs(logx_[k].imag());
            if (need < decay - 1e-9) {
                kind_.push_back(contour_kind::line);
            } else if (net > 0.0) {
                kind_.push_back(contour_kind::hairpin_left);
            } else {
                throw NonConvergence("eval_bivariate_h: no convergent "
                                     "contour for variable");
            }
        }
    }

    void rescale() {
        std::array<complex_t, 2> s{};
        for (int k = 0; k < L_; ++k)
            s[k] = xi_[k];
        scale_ = 0.0;
        scale_ = log_kernel(s).real();
    }

    // Feasible abscissa interval for variable k given the earlier offsets,
    // from the numerator pole-separation inequalities that do not involve
    // later variables.
    std::pair<double, double> feasible_interval(int k) const {
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p_.delta.size(); ++i) {
            const auto& row = p_.dmat[i];
            if (row[k] == 0.0)
                continue;
            bool later = false;
            for (int l = k + 1; l < L_; ++l)
                if (row[l] != 0.0)
                    later = true;
            if (later)
                continue;
            double rhs = p_.delta[i];
            for (int l = 0; l < k; ++l)
                rhs += row[l] * xi_[l];
            const double bound = -rhs / row[k];
            if (row[k] > 0.0)
                lower = std::max(lower, bound);
            else
                upper = std::min(upper, bound);
        }
        return {lower, upper};
    }

    void reset_downstream_midpoints(int k) {
        for (int l = k + 1; l < L_; ++l) {
            const auto [lo, hi] = feasible_interval(l);
            if (std::isfinite(lo) && std::isfinite(hi))
                xi_[l] = 0.5 * (lo + hi);
            else if (std::isfinite(lo))
                xi_[l] = lo + 1.0;
            else if (std::isfinite(hi))
                xi_[l] = hi - 1.0;
        }
    }

    // A vertical line may be moved freely across its pole-free strip; putting
    // it through the saddle (the minimum of the positive integrand along the
    // real axis) keeps the integral on the order of the integrand peak.  At
    // the default midpoint the peak can exceed the integral by many orders,
    // which double precision cannot cancel.
    void refine_line_offsets() {
        for (int k = 0; k < L_; ++k) {
            if (kind_[k] != contour_kind::line)
                continue;
            auto [lo, hi] = feasible_interval(k);
            if (!std::isfinite(lo) || !std::isfinite(hi))
                continue;
            const double margin = 1e-3 * (hi - lo);
            lo += margin;
            hi -= margin;
            const auto objective = [&](double x) -> double {
                xi_[k] = x;
                reset_downstream_midpoints(k);
                rescale();
                std::array<complex_t, 2> s{};
                for (int l = 0; l <= k; ++l)
                    s[l] = xi_[l];
                const double mag = std::abs(level(k + 1, s));
                // absolute magnitude, comparable across trial abscissae
                return mag > 0.0 ? std::log(mag) + scale_
                                 : -std::numeric_limits<double>::infinity();
            };
            // golden-section minimization
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = lo, b = hi;
            double c = b - gr * (b - a);
            double d = a + gr * (b - a);
            double fc = objective(c);
            double fd = objective(d);
            for (int it = 0; it < 48 && (b - a) > 1e-6 * (hi - lo); ++it) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - gr * (b - a);
                    fc = objective(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + gr * (b - a);
                    fd = objective(d);
                }
            }
            xi_[k] = 0.5 * (a + b);
            reset_downstream_midpoints(k);
        }
        rescale();
    }

    complex_t log_kernel(const std::array<complex_t, 2>& s) const {
        complex_t lk{};
        for (std::size_t i = 0; i < p_.delta.size(); ++i) {
            complex_t arg = p_.delta[i];
            for (int k = 0; k < L_; ++k)
                arg += p_.dmat[i][k] * s[k];
            lk += log_gamma_complex(arg);
        }
        for (std::size_t i = 0; i < p_.beta.size(); ++i) {
            complex_t arg = p_.beta[i];
            for (int k = 0; k < L_; ++k)
                arg += p_.bmat[i][k] * s[k];
            lk -= log_gamma_complex(arg);
        }
        for (int k = 0; k < L_; ++k)
            lk -= s[k] * logx_[k];
        return lk;
    }

    complex_t kernel_scaled(const std::array<complex_t, 2>& s) const {
        const complex_t lk = log_kernel(s) - scale_;
        if (stats_ && std::abs(lk.real()) > 700.0)
            ++stats_->branch_warnings;
        if (lk.real() < -740.0)
            return complex_t(0.0, 0.0);
        return std::exp(lk);
    }

    // innermost level returns the scaled kernel; outer levels integrate the
    // next variable's contour (each 1/(2 pi i) factor applied here)
    complex_t level(int k, std::array<complex_t, 2>& s) {
        if (k == L_)
            return kernel_scaled(s);
        return integrate_var(k, s);
    }

    double level_logmag(int k, std::array<complex_t, 2>& s) {
        if (k == L_) {
            const complex_t lk = log_kernel(s) - scale_;
            return lk.real();
        }
        // magnitude probe one level down: use the contour base point
        s[k] = xi_[k];
        return level_logmag(k + 1, s);
    }

    complex_t integrate_var(int k, std::array<complex_t, 2>& s) {
        if (kind_[k] == contour_kind::line)
            return integrate_line(k, s);
        return integrate_hairpin(k, s);
    }

    static std::vector<double> panels(double a, double b) {
        std::vector<double> br;
        const int n =
            std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
        br.reserve(n + 1);
        for (int i = 0; i <= n; ++i)
            br.push_back(a + (b - a) * i / n);
        return br;
    }

    complex_t integrate_line(int k, std::array<complex_t, 2>& s) {
        const double w = p_.truncation;
        const auto f = [&](double y) -> complex_t {
            s[k] = complex_t(xi_[k], y);
            return level(k + 1, s);
        };
        const double fc = std::abs(f(0.0));
        const double tol_abs = rel_tol_ * std::max(fc, 1e-3) * 2.0;
        const complex_t integral =
            integrate_adaptive_segmented(f, panels(-w, w), tol_abs);
        // (1/(2 pi i)) * i dy
        return integral / (2.0 * M_PI);
    }

    // Left-opening hairpin: in from Re -> -inf below the axis at -iH, up
    // through Re s_k = xi_k, back out above the axis at +iH.  Equivalent to
    // the residue sum over the left pole chain; truncated where the
    // integrand falls dead_band nats below its running peak.
    complex_t integrate_hairpin(int k, std::array<complex_t, 2>& s) {
        const double h = hairpin_height;
        const double xi = xi_[k];
        // scan leftward for the truncation point
        double ref = -std::numeric_limits<double>::infinity();
        double t_end = xi;
        for (double t = xi; t > xi - 3000.0; t -= panel_width) {
            s[k] = complex_t(t, h);
            const double lm_top = level_logmag(k + 1, s);
            s[k] = complex_t(t, -h);
            const double lm_bot = level_logmag(k + 1, s);
            const double lm = std::max(lm_top, lm_bot);
            ref = std::max(ref, lm);
            t_end = t;
            if (lm < ref - dead_band || lm < -250.0)
                break;
        }
        if (stats_)
            stats_->max_ray_reach =
                std::max(stats_->max_ray_reach, xi - t_end);

        const auto f_ray = [&](double im) {
            return [this, k, im, &s](double t) -> complex_t {
                s[k] = complex_t(t, im);
                return level(k + 1, s);
            };
        };
        const auto f_vert = [&](double y) -> complex_t {
            s[k] = complex_t(xi, y);
            return level(k + 1, s);
        };

        // tolerance anchored to the largest magnitude seen on the contour,
        // floored so integrals that are negligible at the global scale do
        // not trigger needless refinement
        const double tol_abs =
            rel_tol_ * std::max(std::exp(ref), 1e-3) * 2.0;

        const auto br = panels(t_end, xi);
        const complex_t bottom =
            integrate_adaptive_segmented(f_ray(-h), br, tol_abs);
        const complex_t top =
            integrate_adaptive_segmented(f_ray(h), br, tol_abs);
        const complex_t vert = integrate_adaptive_segmented(
            f_vert, panels(-h, h), tol_abs);
        // counterclockwise: bottom ray rightward, vertical upward, top ray
        // leftward; divided by 2 pi i
        const complex_t total =
            bottom + complex_t(0.0, 1.0) * vert - top;
        return total / complex_t(0.0, 2.0 * M_PI);
    }
};

} // namespace detail

// Scaled evaluation: returns V with H = V * exp(logscale).
inline complex_t eval_bivariate_h_scaled(const FoxHProblem& p, double tol,
                                         double& logscale,
                                         FoxHStats* stats = nullptr) {
    if (p.x.empty() || p.x.size() > 2)
        throw DomainError("eval_bivariate_h: supports 1 or 2 variables");
    std::vector<double> xi = p.contour_offsets;
    const bool optimize = xi.empty();
    if (optimize)
        xi = select_contours(p);
    detail::h_evaluator ev(p, std::move(xi), tol, stats, optimize);
    return ev.eval(logscale);
}

inline complex_t eval_bivariate_h(const FoxHProblem& p, double tol) {
    double logscale = 0.0;
    const complex_t v = eval_bivariate_h_scaled(p, tol, logscale);
    return v * std::exp(complex_t(logscale, 0.0));
}

// ---------------------------------------------------------------------------
// Detection-probability wrapper
// ---------------------------------------------------------------------------

// PD = Phi * H([Omega, -Upsilon M]) with the specific kernel
//   Gamma(s1) Gamma(s2) Gamma(M-1-s1) Gamma(M-s1-s2) /
//   (Gamma(M-s1) Gamma(1-s2)).
struct PdFoxHInputs {
    int m;
    double upsilon;
    double omega;
    double phi; // Omega^{M-1} e^{-Upsilon M} / Gamma(M-1)
};

inline PdFoxHInputs make_pd_foxh_inputs(int m, double upsilon, double omega) {
    const double log_phi = (m - 1.0) * std::log(omega) - upsilon * m -
                           log_gamma_real(m - 1.0);
    return PdFoxHInputs{m, upsilon, omega, std::exp(log_phi)};
}

inline FoxHProblem make_pd_foxh_problem(const PdFoxHInputs& in) {
    const double mm = static_cast<double>(in.m);
    FoxHProblem p;
    p.x = {in.omega, -in.upsilon * mm};
    p.delta = {0.0, 0.0, mm - 1.0, mm};
    p.dmat = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {-1.0, -1.0}};
    p.beta = {mm, 1.0};
    p.bmat = {{-1.0, 0.0}, {0.0, -1.0}};
    return p;
}

inline double pd_foxh(const PdFoxHInputs& in, double tol,
                      FoxHStats* stats = nullptr) {
    FoxHProblem p = make_pd_foxh_problem(in);
    double logscale = 0.0;
    const complex_t v = eval_bivariate_h_scaled(p, tol, logscale, stats);
    const double log_phi = (in.m - 1.0) * std::log(in.omega) -
                           in.upsilon * in.m - log_gamma_real(in.m - 1.0);
    const double amp = std::exp(log_phi + logscale);
    const double imag_part = amp * std::abs(v.imag());
    if (imag_part > tol)
        throw ImaginaryResidue("pd_foxh: imaginary residual exceeds "
                               "tolerance");
    double pd = amp * v.real();
    return pd < 0.0 ? 0.0 : (pd > 1.0 ? 1.0 : pd);
}

} // namespace glrt

#endif
