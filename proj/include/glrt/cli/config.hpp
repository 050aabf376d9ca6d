#ifndef GLRT_CLI_CONFIG_HPP
#define GLRT_CLI_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "glrt/errors.hpp"

namespace glrt {

// key = value configuration with [section] headers; '#' and ';' comments.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw DomainError("config: cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str(), path);
    }

    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>") {
        ConfigFile cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(strip_comment(line));
            if (t.empty())
                continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw DomainError(diag(origin, lineno,
                                           "unterminated section header"));
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw DomainError(diag(origin, lineno, "expected key = value"));
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty())
                throw DomainError(diag(origin, lineno, "empty key"));
            cfg.values_[section + "." + key] = val;
        }
        return cfg;
    }

    bool has(const std::string& key) const {
        return values_.count(key) != 0;
    }

    std::string get_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw DomainError("config " + origin_ + ": missing key '" + key +
                              "'");
        return it->second;
    }

    std::string get_string(const std::string& key,
                           const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const {
        return to_double(key, get_string(key));
    }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long long get_int(const std::string& key) const {
        const std::string s = get_string(key);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw DomainError("config " + origin_ + ": key '" + key +
                              "' is not an integer: " + s);
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        for (const auto& tok : split(get_string(key)))
            out.push_back(to_double(key, tok));
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key) const {
        return split(get_string(key));
    }

private:
    std::map<std::string, std::string> values_;
    std::string origin_ = "<none>";

    static std::string diag(const std::string& origin, int lineno,
                            const std::string& what) {
        return "config " + origin + ":" + std::to_string(lineno) + ": " +
               what;
    }

    static std::string strip_comment(const std::string& s) {
        const auto pos = s.find_first_of("#;");
        return pos == std::string::npos ? s : s.substr(0, pos);
    }

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos)
            return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
            // allow comma separation as well
            std::string piece;
            std::istringstream ci(tok);
            while (std::getline(ci, piece, ','))
                if (!piece.empty())
                    out.push_back(piece);
        }
        return out;
    }

    double to_double(const std::string& key, const std::string& s) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw DomainError("config " + origin_ + ": key '" + key +
                              "' is not a number: " + s);
        }
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace glrt

#endif
