#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glrt/glrt.hpp"
#include "glrt/cli/config.hpp"
#include "glrt/cli/csv.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long trials = -1; // -1 means take the config value
    double tolerance = 0.0;
    bool tolerance_set = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config_path,
                              "experiment configuration file");
    if (config_required)
        c->required();
    cmd->add_option("--out", o.out_path, "output CSV path (default stdout)");
    cmd->add_option("--seed", o.seed, "RNG seed override")
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials override");
    cmd->add_option("--tolerance", o.tolerance, "numeric tolerance override")
        ->each([&o](const std::string&) { o.tolerance_set = true; });
}

struct Experiment {
    std::string id;
    int n = 0;
    int m = 0;
    double sigma_sq = 1.0;
    std::vector<std::string> detectors;
    std::vector<double> pfa;
    std::vector<double> snr_db;
    long long trials = 0;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    double target_pd = 0.8;
    std::string family;
    std::vector<double> family_values;
};

glrt::DetectorKind parse_detector(const std::string& name) {
    if (name == "post_glrt")
        return glrt::DetectorKind::post_glrt;
    if (name == "pre_glrt")
        return glrt::DetectorKind::pre_glrt;
    if (name == "square_law")
        return glrt::DetectorKind::square_law;
    if (name == "lrt")
        return glrt::DetectorKind::lrt;
    throw glrt::DomainError("config: unknown detector '" + name + "'");
}

Experiment load_experiment(const CommonOpts& o, const std::string& fallback_id,
                           bool need_scenario) {
    Experiment e;
    if (!o.config_path.empty()) {
        const glrt::ConfigFile cfg =
            glrt::ConfigFile::parse_file(o.config_path);
        e.id = cfg.get_string("experiment.id", fallback_id);
        if (need_scenario) {
            e.n = static_cast<int>(cfg.get_int("scenario.n"));
            e.m = static_cast<int>(cfg.get_int("scenario.m"));
            e.detectors = cfg.get_string_list("scenario.detectors");
            e.pfa = cfg.get_double_list("experiment.pfa");
            e.snr_db = cfg.get_double_list("experiment.snr_db");
        }
        e.sigma_sq = cfg.get_double("scenario.sigma_sq", 1.0);
        e.trials = cfg.get_int("experiment.trials", 0);
        e.seed = static_cast<std::uint64_t>(cfg.get_int("experiment.seed", 1));
        e.tolerance = cfg.get_double("experiment.tolerance", 1e-9);
        e.target_pd = cfg.get_double("experiment.target_pd", 0.8);
        e.family = cfg.get_string("experiment.family", "");
        if (cfg.has("experiment.family_values"))
            e.family_values = cfg.get_double_list("experiment.family_values");
    } else {
        e.id = fallback_id;
    }
    if (o.seed_set)
        e.seed = o.seed;
    if (o.trials >= 0)
        e.trials = o.trials;
    if (o.tolerance_set)
        e.tolerance = o.tolerance;
    return e;
}

void validate_grids(const Experiment& e) {
    if (e.n < 1 || e.m < 2)
        throw glrt::DomainError("config: scenario needs n >= 1 and m >= 2");
    if (e.detectors.empty())
        throw glrt::DomainError("config: detector list is empty");
    if (e.pfa.empty())
        throw glrt::DomainError("config: pfa grid is empty");
    if (e.snr_db.empty())
        throw glrt::DomainError("config: snr_db grid is empty");
    for (const auto& d : e.detectors)
        parse_detector(d);
}

void emit(const CommonOpts& o, const std::vector<glrt::CsvRow>& rows) {
    if (o.out_path.empty()) {
        glrt::write_csv(std::cout, rows);
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out)
        throw glrt::DomainError("cannot open output file " + o.out_path);
    glrt::write_csv(out, rows);
}

double ms(std::chrono::duration<double> d) { return d.count() * 1e3; }

// Analytic PD of one detector at a grid point; post-GLRT reports the series
// term count and timing alongside.
glrt::CsvRow analytic_row(const Experiment& e, const std::string& id,
                          const std::string& det, double pfa, double snr_db,
                          int n, int m) {
    const double snr = glrt::db_to_linear(snr_db);
    const double ups = n * snr;
    glrt::CsvRow row;
    row.experiment_id = id;
    row.detector = det;
    row.method = "series";
    row.pfa = pfa;
    row.snr_db = snr_db;
    switch (parse_detector(det)) {
    case glrt::DetectorKind::post_glrt: {
        const auto rep = glrt::pd_series(
            glrt::make_operating_point(m, pfa, ups), e.tolerance);
        row.pd = rep.pd;
        row.terms_used = rep.terms_used;
        row.elapsed_ms = ms(rep.elapsed);
        break;
    }
    case glrt::DetectorKind::pre_glrt:
        row.pd = glrt::pre_glrt_pd(pfa, m, n, snr);
        break;
    case glrt::DetectorKind::square_law:
        row.pd = glrt::square_law_pd(pfa, m, ups);
        break;
    case glrt::DetectorKind::lrt:
        row.pd = glrt::lrt_pd(pfa, m, ups);
        break;
    }
    return row;
}

glrt::CsvRow montecarlo_row(const Experiment& e, const std::string& id,
                            const std::string& det, double pfa,
                            double snr_db) {
    const double snr = glrt::db_to_linear(snr_db);
    const double ups = e.n * snr;
    const glrt::Scenario sc = glrt::make_equal_snr_scenario(
        e.n, e.m, snr, e.sigma_sq, e.seed);
    double thr = 0.0;
    glrt::Detector d{parse_detector(det)};
    switch (d.kind) {
    case glrt::DetectorKind::post_glrt:
        thr = glrt::threshold_for_pfa(pfa, e.m);
        break;
    case glrt::DetectorKind::pre_glrt:
        thr = glrt::pre_glrt_threshold(pfa, e.m, e.n);
        break;
    case glrt::DetectorKind::square_law:
        thr = glrt::square_law_threshold(pfa, e.m, e.n, e.sigma_sq);
        break;
    case glrt::DetectorKind::lrt:
        d = glrt::lrt_reference(sc);
        thr = glrt::lrt_threshold(pfa, e.m, ups);
        break;
    }
    const glrt::TrialReport rep =
        glrt::estimate_rate(d, thr, sc, e.trials);
    glrt::CsvRow row;
    row.experiment_id = id;
    row.detector = det;
    row.method = "montecarlo";
    row.pfa = pfa;
    row.snr_db = snr_db;
    row.pd = rep.rate;
    row.ci_low = rep.ci_low;
    row.ci_high = rep.ci_high;
    return row;
}

int cmd_roc(const CommonOpts& o) {
    const Experiment e = load_experiment(o, "roc", true);
    validate_grids(e);
    std::vector<glrt::CsvRow> rows;
    for (const auto& det : e.detectors)
        for (double snr_db : e.snr_db)
            for (double pfa : e.pfa) {
                rows.push_back(
                    analytic_row(e, e.id, det, pfa, snr_db, e.n, e.m));
                if (e.trials > 0)
                    rows.push_back(montecarlo_row(e, e.id, det, pfa, snr_db));
            }
    emit(o, rows);
    return 0;
}

int cmd_pd_vs_snr(const CommonOpts& o) {
    Experiment e = load_experiment(o, "pd_vs_snr", true);
    validate_grids(e);
    if (!e.family.empty() && e.family != "n" && e.family != "m" &&
        e.family != "pfa")
        throw glrt::DomainError("config: family must be n, m or pfa");
    std::vector<double> members = e.family_values;
    if (members.empty())
        members.push_back(0.0); // single unnamed member uses the base config

    std::vector<glrt::CsvRow> rows;
    for (double fv : members) {
        int n = e.n, m = e.m;
        double pfa = e.pfa.front();
        std::string id = e.id;
        if (e.family == "n")
            n = static_cast<int>(fv);
        else if (e.family == "m")
            m = static_cast<int>(fv);
        else if (e.family == "pfa")
            pfa = fv;
        if (!e.family.empty() && !e.family_values.empty()) {
            std::ostringstream tag;
            tag << id << "_" << e.family << "=" << fv;
            id = tag.str();
        }

        // LRT reference curve for the loss column
        glrt::pd_curve ref;
        for (double snr_db : e.snr_db)
            ref.emplace_back(snr_db, glrt::lrt_pd(pfa, m,
                             n * glrt::db_to_linear(snr_db)));

        for (const auto& det : e.detectors) {
            std::vector<glrt::CsvRow> curve_rows;
            glrt::pd_curve curve;
            for (double snr_db : e.snr_db) {
                curve_rows.push_back(
                    analytic_row(e, id, det, pfa, snr_db, n, m));
                curve.emplace_back(snr_db, curve_rows.back().pd);
            }
            try {
                const double loss = glrt::snr_loss(curve, ref, e.target_pd);
                for (auto& r : curve_rows)
                    r.snr_loss_db = loss;
            } catch (const glrt::BracketError&) {
                // target PD outside the sampled grid: column stays empty
            }
            rows.insert(rows.end(), curve_rows.begin(), curve_rows.end());
        }
    }
    emit(o, rows);
    return 0;
}

struct Table1Row {
    int m;
    double pfa;
    double upsilon_db;
};

constexpr Table1Row table1_rows[] = {
    {50, 1e-8, -10.0}, {80, 1e-8, -10.0}, {100, 1e-8, -10.0},
    {50, 1e-8, -5.0},  {50, 1e-6, -5.0},  {50, 1e-4, -5.0},
    {50, 1e-6, -3.0},  {50, 1e-6, -2.0},  {50, 1e-6, -1.0},
};

int cmd_table1(const CommonOpts& o) {
    const Experiment e = load_experiment(o, "table1", false);
    std::vector<glrt::CsvRow> rows;
    std::printf("%4s %8s %6s  %-14s %-14s %10s %6s %9s %9s %6s\n", "M",
                "PFA", "U_dB", "PD_quadrature", "PD_series", "abs_diff",
                "terms", "t_quad_ms", "t_ser_ms", "red_%");
    int idx = 0;
    for (const auto& t : table1_rows) {
        ++idx;
        const auto op = glrt::make_operating_point(
            t.m, t.pfa, glrt::db_to_linear(t.upsilon_db));
        const auto q0 = std::chrono::steady_clock::now();
        const double pd_q = glrt::pd_quadrature(op, e.tolerance);
        const std::chrono::duration<double> tq =
            std::chrono::steady_clock::now() - q0;
        const auto rep = glrt::pd_series(op, e.tolerance);
        const double diff = std::abs(pd_q - rep.pd);
        const double red = 100.0 * (1.0 - rep.elapsed / tq);
        std::printf("%4d %8.0e %6.1f  %.8e %.8e %10.2e %6d %9.3f %9.3f "
                    "%6.1f\n",
                    t.m, t.pfa, t.upsilon_db, pd_q, rep.pd, diff,
                    rep.terms_used, ms(tq), ms(rep.elapsed), red);
        const std::string id = "table1_row" + std::to_string(idx);
        glrt::CsvRow rq;
        rq.experiment_id = id;
        rq.detector = "post_glrt";
        rq.method = "quadrature";
        rq.pfa = t.pfa;
        rq.snr_db = t.upsilon_db; // this table is parameterized by Upsilon in dB
        rq.pd = pd_q;
        rq.elapsed_ms = ms(tq);
        rows.push_back(rq);
        glrt::CsvRow rs = rq;
        rs.method = "series";
        rs.pd = rep.pd;
        rs.terms_used = rep.terms_used;
        rs.elapsed_ms = ms(rep.elapsed);
        rows.push_back(rs);
    }
    if (!o.out_path.empty())
        emit(o, rows);
    return 0;
}

struct ValidateState {
    int failures = 0;
    void report(const std::string& name, bool ok, double measured,
                double limit) {
        std::printf("%s %-34s measured=%.6g limit=%.6g\n",
                    ok ? "PASS" : "FAIL", name.c_str(), measured, limit);
        if (!ok)
            ++failures;
    }
};

int cmd_validate(const CommonOpts& o, double perturb) {
    const Experiment e = load_experiment(o, "validate", false);
    ValidateState v;

    // threshold <-> pfa round trip (perturb is a fault-injection hook)
    double worst = 0.0;
    for (int m : {2, 15, 50, 100})
        for (double pfa : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const double g = glrt::threshold_for_pfa(pfa, m) + perturb;
            const double back = glrt::pfa_closed_form(g, m);
            worst = std::max(worst, std::abs(back - pfa) / pfa);
        }
    v.report("pfa_round_trip_rel", worst <= 1e-12, worst, 1e-12);

    // series against quadrature on the reference parameter sets
    double worst_sq = 0.0;
    for (const auto& t : table1_rows) {
        const auto op = glrt::make_operating_point(
            t.m, t.pfa, glrt::db_to_linear(t.upsilon_db));
        const double pd_q = glrt::pd_quadrature(op, 1e-10);
        const auto rep = glrt::pd_series(op, 1e-10);
        worst_sq = std::max(worst_sq, std::abs(pd_q - rep.pd));
    }
    v.report("series_vs_quadrature_abs", worst_sq <= 1e-8, worst_sq, 1e-8);

    // contour-integral route on a low and a high PD set
    double worst_h = 0.0;
    for (int i : {0, 4}) {
        const auto& t = table1_rows[i];
        const double ups = glrt::db_to_linear(t.upsilon_db);
        const auto op = glrt::make_operating_point(t.m, t.pfa, ups);
        const auto in = glrt::make_pd_foxh_inputs(t.m, ups,
                                                  (t.m - 1.0) / op.gamma);
        const double pd_h = glrt::pd_foxh(in, 1e-8);
        const double pd_s = glrt::pd_series(op, 1e-10).pd;
        worst_h = std::max(worst_h, std::abs(pd_h - pd_s));
    }
    v.report("foxh_vs_series_abs", worst_h <= 1e-6, worst_h, 1e-6);

    // null and alternative densities integrate to one
    const glrt::H0Law h0{15};
    const glrt::H1Law h1{15, 0.8};
    const auto mass = [](auto&& pdf) {
        // map z in [0, inf) to u in (0, 1]
        return glrt::integrate_adaptive(
            [&](double u) {
                const double z = (1.0 - u) / u;
                return pdf(z) / (u * u);
            },
            1e-12, 1.0, 1e-11);
    };
    const double m0 =
        mass([&](double z) { return glrt::pdf_h0(z, h0); });
    const double m1 =
        mass([&](double z) { return glrt::pdf_h1(z, h1); });
    v.report("pdf_h0_total_mass", std::abs(m0 - 1.0) <= 1e-9, m0, 1.0);
    v.report("pdf_h1_total_mass", std::abs(m1 - 1.0) <= 1e-9, m1, 1.0);

    // zero-SNR alternative collapses to the null exactly
    double worst_z = 0.0;
    for (double z : {0.1, 1.0, 5.0, 40.0})
        worst_z = std::max(
            worst_z, std::abs(glrt::pdf_h1(z, glrt::H1Law{15, 0.0}) -
                              glrt::pdf_h0(z, glrt::H0Law{15})));
    v.report("h1_at_zero_snr_equals_h0", worst_z == 0.0, worst_z, 0.0);

    // decomposition lemmas by simulation
    const long long trials = e.trials > 0 ? e.trials : 100000;
    const glrt::Scenario sc = glrt::make_equal_snr_scenario(
        4, 15, 0.05, 1.0, e.seed);
    const glrt::LemmaReport lr = glrt::lemma_tests(sc, trials);
    v.report("lemma1_i2_h0_ks_p", lr.i2_h0_ks_p > 0.01, lr.i2_h0_ks_p, 0.01);
    v.report("lemma1_i2_h1_ks_p", lr.i2_h1_ks_p > 0.01, lr.i2_h1_ks_p, 0.01);
    v.report("lemma1_i2_cross_ks_p", lr.i2_cross_ks_p > 0.01,
             lr.i2_cross_ks_p, 0.01);
    v.report("i1_h0_ks_p", lr.i1_h0_ks_p > 0.01, lr.i1_h0_ks_p, 0.01);
    v.report("i1_h1_ks_p", lr.i1_h1_ks_p > 0.01, lr.i1_h1_ks_p, 0.01);
    const double bound = 4.0 / std::sqrt(static_cast<double>(trials));
    v.report("lemma2_corr_h0", std::abs(lr.corr_h0) < bound,
             lr.corr_h0, bound);
    v.report("lemma2_corr_h1", std::abs(lr.corr_h1) < bound,
             lr.corr_h1, bound);

    // dB conversion round trip
    double worst_db = 0.0;
    for (double db : {-10.0, -3.0, 0.0, 7.5})
        worst_db = std::max(
            worst_db,
            std::abs(glrt::linear_to_db(glrt::db_to_linear(db)) - db));
    v.report("db_round_trip_abs", worst_db <= 1e-12, worst_db, 1e-12);

    std::printf("%s (%d failure%s)\n", v.failures == 0 ? "ALL PASS" : "FAIL",
                v.failures, v.failures == 1 ? "" : "s");
    return v.failures == 0 ? 0 : 1;
}

// Problem file for the fox-h subcommand, [problem] section with keys
// x, delta, dmat, beta, bmat (matrix rows separated by '|'), offsets
// (auto or a list), w.
glrt::FoxHProblem load_problem(const std::string& path) {
    const glrt::ConfigFile cfg = glrt::ConfigFile::parse_file(path);
    glrt::FoxHProblem p;
    p.x = cfg.get_double_list("problem.x");
    p.delta = cfg.get_double_list("problem.delta");
    const auto parse_matrix = [&](const std::string& key) {
        std::vector<std::vector<double>> rows;
        if (!cfg.has(key))
            return rows;
        std::istringstream in(cfg.get_string(key));
        std::string row;
        while (std::getline(in, row, '|')) {
            std::vector<double> r;
            std::istringstream ri(row);
            double val;
            while (ri >> val)
                r.push_back(val);
            if (r.size() != p.x.size())
                throw glrt::DomainError("problem " + path + ": key '" + key +
                                        "' row width does not match x");
            rows.push_back(r);
        }
        return rows;
    };
    p.dmat = parse_matrix("problem.dmat");
    if (cfg.has("problem.beta"))
        p.beta = cfg.get_double_list("problem.beta");
    p.bmat = parse_matrix("problem.bmat");
    const std::string off = cfg.get_string("problem.offsets", "auto");
    if (off != "auto")
        p.contour_offsets = cfg.get_double_list("problem.offsets");
    p.truncation = cfg.get_double("problem.w", 100.0);
    if (p.dmat.size() != p.delta.size() || p.bmat.size() != p.beta.size())
        throw glrt::DomainError("problem " + path +
                                ": offset/coefficient row counts differ");
    return p;
}

int cmd_foxh(const CommonOpts& o, const std::string& problem_path) {
    const glrt::FoxHProblem p = load_problem(problem_path);
    const double tol = o.tolerance_set ? o.tolerance : 1e-9;
    glrt::FoxHStats stats;
    double logscale = 0.0;
    const glrt::complex_t v =
        glrt::eval_bivariate_h_scaled(p, tol, logscale, &stats);
    const glrt::complex_t h = v * std::exp(logscale);
    std::printf("H = %.17g %+.17gi\n", h.real(), h.imag());
    std::printf("scaled: (%.17g %+.17gi) * exp(%.17g)\n", v.real(), v.imag(),
                logscale);
    std::printf("branch_warnings = %d, max_ray_reach = %g\n",
                stats.branch_warnings, stats.max_ray_reach);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GLRT radar detection experiments"};
    app.require_subcommand(1);

    CommonOpts roc_o, pd_o, t1_o, val_o, fh_o;
    std::string problem_path;
    double perturb = 0.0;

    auto* roc = app.add_subcommand("roc", "ROC sweep over a PFA grid");
    add_common_flags(roc, roc_o, true);
    auto* pd = app.add_subcommand("pd-vs-snr",
                                  "PD against SNR with a family parameter");
    add_common_flags(pd, pd_o, true);
    auto* t1 = app.add_subcommand("table1",
                                  "series-vs-quadrature reference table");
    add_common_flags(t1, t1_o, false);
    auto* val = app.add_subcommand("validate", "cross-module invariant suite");
    add_common_flags(val, val_o, false);
    val->add_option("--perturb-threshold", perturb,
                    "fault-injection offset added to thresholds")
        ->group("");
    auto* fh = app.add_subcommand("fox-h",
                                  "evaluate a Mellin-Barnes problem file");
    add_common_flags(fh, fh_o, false);
    fh->add_option("--problem", problem_path, "problem description file")
        ->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (roc->parsed())
            return cmd_roc(roc_o);
        if (pd->parsed())
            return cmd_pd_vs_snr(pd_o);
        if (t1->parsed())
            return cmd_table1(t1_o);
        if (val->parsed())
            return cmd_validate(val_o, perturb);
        if (fh->parsed())
            return cmd_foxh(fh_o, problem_path);
    } catch (const glrt::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    return 0;
}
