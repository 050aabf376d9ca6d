#ifndef GLRT_CLI_CSV_HPP
#define GLRT_CLI_CSV_HPP

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace glrt {

// One output record.  The column set is fixed; optional fields render empty.
struct CsvRow {
    std::string experiment_id;
    std::string detector;
    std::string method; // series | quadrature | foxh | montecarlo
    double pfa = 0.0;
    double snr_db = 0.0;
    double pd = 0.0;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<long long> terms_used;
    std::optional<double> elapsed_ms;
    std::optional<double> snr_loss_db;
};

namespace detail {

// 17 significant digits: round-trip exact for IEEE doubles
inline std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline const char* csv_header() {
    return "experiment_id,detector,method,pfa,snr_db,pd,ci_low,ci_high,"
           "terms_used,elapsed_ms,snr_loss_db\n";
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << csv_header();
    for (const auto& r : rows) {
        os << detail::csv_quote(r.experiment_id) << ','
           << detail::csv_quote(r.detector) << ','
           << detail::csv_quote(r.method) << ','
           << detail::format_float(r.pfa) << ','
           << detail::format_float(r.snr_db) << ','
           << detail::format_float(r.pd) << ',';
        if (r.ci_low)
            os << detail::format_float(*r.ci_low);
        os << ',';
        if (r.ci_high)
            os << detail::format_float(*r.ci_high);
        os << ',';
        if (r.terms_used)
            os << *r.terms_used;
        os << ',';
        if (r.elapsed_ms)
            os << detail::format_float(*r.elapsed_ms);
        os << ',';
        if (r.snr_loss_db)
            os << detail::format_float(*r.snr_loss_db);
        os << '\n';
    }
}

} // namespace glrt

#endif
