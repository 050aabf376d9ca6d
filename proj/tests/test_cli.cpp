#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "glrt/cli/config.hpp"
#include "glrt/cli/csv.hpp"

TEST_CASE("configuration parsing") {
    const std::string text =
        "# comment\n"
        "[scenario]\n"
        "n = 3\n"
        "m = 22            ; trailing comment\n"
        "detectors = post_glrt, lrt square_law\n"
        "\n"
        "[experiment]\n"
        "pfa = 1e-2 1e-3,1e-4\n"
        "label = fig4\n";
    const auto cfg = glrt::ConfigFile::parse_string(text, "t.ini");
    CHECK(cfg.get_int("scenario.n") == 3);
    CHECK(cfg.get_int("scenario.m") == 22);
    CHECK(cfg.get_string("experiment.label") == "fig4");
    CHECK(cfg.get_double("experiment.missing", 7.5) == 7.5);
    const auto dets = cfg.get_string_list("scenario.detectors");
    REQUIRE(dets.size() == 3);
    CHECK(dets[0] == "post_glrt");
    CHECK(dets[2] == "square_law");
    const auto pfas = cfg.get_double_list("experiment.pfa");
    REQUIRE(pfas.size() == 3);
    CHECK(pfas[1] == 1e-3);
}

TEST_CASE("configuration diagnostics carry origin and line") {
    const std::string bad = "[scenario]\nvalid = 1\nnot a pair\n";
    try {
        glrt::ConfigFile::parse_string(bad, "broken.ini");
        FAIL("expected a parse error");
    } catch (const glrt::DomainError& e) {
        const std::string what = e.what();
        CHECK(what.find("broken.ini") != std::string::npos);
        CHECK(what.find(":3:") != std::string::npos);
    }
    const auto cfg = glrt::ConfigFile::parse_string("[a]\nk = abc\n", "x");
    CHECK_THROWS_AS(cfg.get_double("a.k"), glrt::DomainError);
    CHECK_THROWS_AS(cfg.get_int("a.k"), glrt::DomainError);
    CHECK_THROWS_AS(cfg.get_string("a.absent"), glrt::DomainError);
}

TEST_CASE("decibel conversion round trip") {
    for (double db : {-10.0, -3.0, 0.0, 12.5})
        CHECK(glrt::linear_to_db(glrt::db_to_linear(db)) ==
              Catch::Approx(db).margin(1e-12));
    CHECK(glrt::db_to_linear(-10.0) == Catch::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("CSV schema") {
    std::ostringstream out;
    glrt::CsvRow full;
    full.experiment_id = "fig4";
    full.detector = "post_glrt";
    full.method = "series";
    full.pfa = 1e-4;
    full.snr_db = -7.9;
    full.pd = 1.0 / 3.0;
    full.terms_used = 37;
    full.elapsed_ms = 0.5;
    glrt::CsvRow sparse;
    sparse.experiment_id = "a,b"; // needs quoting
    sparse.detector = "lrt";
    sparse.method = "montecarlo";
    sparse.pfa = 0.01;
    sparse.snr_db = -8.0;
    sparse.pd = 0.25;
    sparse.ci_low = 0.24;
    sparse.ci_high = 0.26;
    glrt::write_csv(out, {full, sparse});

    const std::string text = out.str();
    CHECK(text.find("experiment_id,detector,method,pfa,snr_db,pd,ci_low,"
                    "ci_high,terms_used,elapsed_ms,snr_loss_db\n") == 0);
    // 17 significant digits round-trip doubles exactly
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.find("\"a,b\"") != std::string::npos);
    CHECK(text.find("\r") == std::string::npos);

    // deterministic: identical rows format to identical bytes
    std::ostringstream again;
    glrt::write_csv(again, {full, sparse});
    CHECK(text == again.str());

    // every row has the full column count
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t commas = 0;
        bool quoted = false;
        for (char c : line) {
            if (c == '"')
                quoted = !quoted;
            else if (c == ',' && !quoted)
                ++commas;
        }
        CHECK(commas == 10);
    }
}
