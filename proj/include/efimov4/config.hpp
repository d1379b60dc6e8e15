#ifndef EFIMOV4_CONFIG_HPP
#define EFIMOV4_CONFIG_HPP

/*  Flat key = value run configuration.  '#' starts a comment, blank lines
 *  are skipped, unknown and duplicate keys are errors.  m_A and m_B are
 *  required; everything else has a documented default.
 */

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "efimov4/errors.hpp"
#include "efimov4/system.hpp"

namespace efimov4 {

struct RunConfig {
    double m_A = 0, m_B = 0; // required
    ModelParams params;
    int alpha_max = 2, m_max = 2, n_max = 6;
    double R4_min = 0; // defaults to R0 when unset
    double R4_max = 1e5;
    int R4_points = 60;
    double E_min = 1e-13, E_max = 1.0;
    int E_points = 2000;
    double a_sweep_min = 0, a_sweep_max = 0; // |a_AA| sweep; defaults derived
    int a_sweep_points = 400;
    int threshold_n = 1;

    std::vector<std::string> defaults_applied; // echoed to the run log

    ParticleSystem system() const { return build_system(m_A, m_B); }
};

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.m_A == b.m_A && a.m_B == b.m_B && a.params.R0 == b.params.R0 &&
           a.params.a_AB == b.params.a_AB && a.params.a_AA == b.params.a_AA &&
           a.params.beta == b.params.beta && a.params.Phi == b.params.Phi &&
           a.alpha_max == b.alpha_max && a.m_max == b.m_max && a.n_max == b.n_max &&
           a.R4_min == b.R4_min && a.R4_max == b.R4_max && a.R4_points == b.R4_points &&
           a.E_min == b.E_min && a.E_max == b.E_max && a.E_points == b.E_points &&
           a.a_sweep_min == b.a_sweep_min && a.a_sweep_max == b.a_sweep_max &&
           a.a_sweep_points == b.a_sweep_points && a.threshold_n == b.threshold_n;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw parse_error("malformed number '" + v + "'", line);
    return x;
}

inline int parse_int(const std::string& v, int line) {
    const double x = parse_number(v, line);
    if (x != std::floor(x) || std::fabs(x) > 1e9)
        throw parse_error("expected an integer, got '" + v + "'", line);
    return static_cast<int>(x);
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::pair<std::string, int>> kv; // key -> (value, line)
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw parse_error("expected 'key = value'", line);
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) throw parse_error("expected 'key = value'", line);
        if (kv.count(key)) throw parse_error("duplicate key '" + key + "'", line);
        kv[key] = {val, line};
    }

    auto take = [&](const char* key) -> std::optional<std::pair<std::string, int>> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto out = it->second;
        kv.erase(it);
        return out;
    };
    auto num = [&](const char* key, double& dst, const char* def_note) {
        if (auto v = take(key))
            dst = detail::parse_number(v->first, v->second);
        else if (def_note)
            cfg.defaults_applied.push_back(std::string(key) + " = " + def_note + " (default)");
    };
    auto integer = [&](const char* key, int& dst, const char* def_note) {
        if (auto v = take(key))
            dst = detail::parse_int(v->first, v->second);
        else if (def_note)
            cfg.defaults_applied.push_back(std::string(key) + " = " + def_note + " (default)");
    };

    if (auto v = take("m_A"))
        cfg.m_A = detail::parse_number(v->first, v->second);
    else
        throw validation_error("missing required key m_A");
    if (auto v = take("m_B"))
        cfg.m_B = detail::parse_number(v->first, v->second);
    else
        throw validation_error("missing required key m_B");

    num("R0", cfg.params.R0, "10");
    num("a_AB", cfg.params.a_AB, "100");
    if (auto v = take("a_AA")) {
        if (v->first == "inf")
            cfg.params.a_AA = std::nullopt;
        else
            cfg.params.a_AA = detail::parse_number(v->first, v->second);
    } else {
        cfg.defaults_applied.push_back("a_AA = inf (default)");
    }
    num("beta", cfg.params.beta, "1e-3");
    num("Phi", cfg.params.Phi, "0");
    integer("alpha_max", cfg.alpha_max, "2");
    integer("m_max", cfg.m_max, "2");
    integer("n_max", cfg.n_max, "6");
    num("R4_min", cfg.R4_min, nullptr);
    num("R4_max", cfg.R4_max, "1e5");
    integer("R4_points", cfg.R4_points, "60");
    num("E_min", cfg.E_min, "1e-13");
    num("E_max", cfg.E_max, "1");
    integer("E_points", cfg.E_points, "2000");
    num("a_sweep_min", cfg.a_sweep_min, nullptr);
    num("a_sweep_max", cfg.a_sweep_max, nullptr);
    integer("a_sweep_points", cfg.a_sweep_points, "400");
    integer("threshold_n", cfg.threshold_n, "1");

    if (!kv.empty()) {
        const auto& it = *kv.begin();
        throw parse_error("unknown key '" + it.first + "'", it.second.second);
    }

    // derived defaults
    if (cfg.R4_min == 0) {
        cfg.R4_min = cfg.params.R0;
        cfg.defaults_applied.push_back("R4_min = R0 (default)");
    }
    if (cfg.params.a_AA) {
        const double a = std::fabs(*cfg.params.a_AA);
        if (cfg.a_sweep_min == 0) {
            cfg.a_sweep_min = a;
            cfg.defaults_applied.push_back("a_sweep_min = |a_AA| (default)");
        }
        if (cfg.a_sweep_max == 0) {
            cfg.a_sweep_max = 22.7 * a;
            cfg.defaults_applied.push_back("a_sweep_max = 22.7 |a_AA| (default)");
        }
    }

    // validation
    build_system(cfg.m_A, cfg.m_B);
    validate(cfg.params);
    if (cfg.alpha_max < 1) throw validation_error("alpha_max must be >= 1");
    if (cfg.m_max < 0) throw validation_error("m_max must be >= 0");
    if (cfg.n_max < 1) throw validation_error("n_max must be >= 1");
    if (cfg.threshold_n < 1) throw validation_error("threshold_n must be >= 1");
    if (!(cfg.R4_min > 0) || !(cfg.R4_max > cfg.R4_min))
        throw validation_error("R4 range must be positive and ordered");
    if (cfg.R4_points < 2) throw validation_error("R4_points must be >= 2");
    if (!(cfg.E_min > 0) || !(cfg.E_max > cfg.E_min))
        throw validation_error("E range must be positive and ordered");
    if (cfg.E_points < 2) throw validation_error("E_points must be >= 2");
    if (cfg.a_sweep_points < 2) throw validation_error("a_sweep_points must be >= 2");
    return cfg;
}

/// Canonical text form; parse_config(serialize_config(cfg)) == cfg.
inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    auto put = [&](const char* key, double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << "\n";
    };
    auto puti = [&](const char* key, int v) { out << key << " = " << v << "\n"; };
    put("m_A", cfg.m_A);
    put("m_B", cfg.m_B);
    put("R0", cfg.params.R0);
    put("a_AB", cfg.params.a_AB);
    if (cfg.params.a_AA)
        put("a_AA", *cfg.params.a_AA);
    else
        out << "a_AA = inf\n";
    put("beta", cfg.params.beta);
    put("Phi", cfg.params.Phi);
    puti("alpha_max", cfg.alpha_max);
    puti("m_max", cfg.m_max);
    puti("n_max", cfg.n_max);
    put("R4_min", cfg.R4_min);
    put("R4_max", cfg.R4_max);
    puti("R4_points", cfg.R4_points);
    put("E_min", cfg.E_min);
    put("E_max", cfg.E_max);
    puti("E_points", cfg.E_points);
    if (cfg.a_sweep_min > 0) put("a_sweep_min", cfg.a_sweep_min);
    if (cfg.a_sweep_max > 0) put("a_sweep_max", cfg.a_sweep_max);
    puti("a_sweep_points", cfg.a_sweep_points);
    puti("threshold_n", cfg.threshold_n);
    return out.str();
}

} // namespace efimov4

#endif
