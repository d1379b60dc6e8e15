#ifndef EFIMOV4_IO_HPP
#define EFIMOV4_IO_HPP

/*  Subcommand runners and structured output.  Every subcommand writes its
 *  primary file plus a metadata sidecar (resolved config, tool version,
 *  wall time); CSV output uses scientific notation with 12 significant
 *  digits, mandatory header, fixed column order, so identical configs give
 *  byte-identical files.
 */

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "efimov4/channels.hpp"
#include "efimov4/config.hpp"
#include "efimov4/errors.hpp"
#include "efimov4/recombination.hpp"
#include "efimov4/universal.hpp"

namespace efimov4 {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

struct RunOptions {
    std::string out_dir = "out";
    bool strict = false;
    bool numeric_crossings = false;
};

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open output file " + path);
    f << content;
}

inline nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["m_A"] = cfg.m_A;
    j["m_B"] = cfg.m_B;
    j["R0"] = cfg.params.R0;
    j["a_AB"] = cfg.params.a_AB;
    if (cfg.params.a_AA)
        j["a_AA"] = *cfg.params.a_AA;
    else
        j["a_AA"] = "inf";
    j["beta"] = cfg.params.beta;
    j["Phi"] = cfg.params.Phi;
    j["alpha_max"] = cfg.alpha_max;
    j["m_max"] = cfg.m_max;
    j["n_max"] = cfg.n_max;
    j["R4_min"] = cfg.R4_min;
    j["R4_max"] = cfg.R4_max;
    j["R4_points"] = cfg.R4_points;
    j["E_min"] = cfg.E_min;
    j["E_max"] = cfg.E_max;
    j["E_points"] = cfg.E_points;
    j["a_sweep_min"] = cfg.a_sweep_min;
    j["a_sweep_max"] = cfg.a_sweep_max;
    j["a_sweep_points"] = cfg.a_sweep_points;
    j["threshold_n"] = cfg.threshold_n;
    return j;
}

inline void write_sidecar(const std::string& dir, const std::string& sub, const RunConfig& cfg,
                          double wall_ms, const nlohmann::json& extra = {}) {
    nlohmann::json j;
    j["tool"] = "efimov4";
    j["version"] = kToolVersion;
    j["subcommand"] = sub;
    j["config"] = config_json(cfg);
    j["defaults_applied"] = cfg.defaults_applied;
    j["wall_time_ms"] = wall_ms;
    if (!extra.is_null()) j["derived"] = extra;
    write_file(dir + "/" + sub + "_meta.json", j.dump(2) + "\n");
}

} // namespace detail

// ------------------------------------------------------------- subcommands

inline void run_constants(const RunConfig& cfg, const RunOptions& opt, std::ostream& out) {
    const auto uc = UniversalConstants::compute(cfg.alpha_max);
    nlohmann::json j;
    j["s0"] = uc.s0;
    j["gamma"] = uc.gamma;
    j["s_alpha"] = uc.s_alpha;
    j["efimov_ratio"] = uc.efimov_ratio;
    j["length_ratio"] = uc.length_ratio;
    const std::string text = j.dump(2) + "\n";
    out << text;
    detail::write_file(opt.out_dir + "/constants.json", text);
}

inline void run_potentials(const RunConfig& cfg, const RunOptions& opt) {
    const auto sys = cfg.system();
    const auto uc = UniversalConstants::compute(cfg.alpha_max);
    const double wall = core_wall(sys, cfg.params);
    if (!(cfg.R4_min > wall))
        throw domain_error("R4 range starts inside the regularization core (R4_min = " +
                           std::to_string(cfg.R4_min) + " <= " + std::to_string(wall) + ")");
    GridSpec grid;
    grid.strict = opt.strict;
    const auto R4s = log_grid(cfg.R4_min * (1 + 1e-12), cfg.R4_max, cfg.R4_points);
    const auto curves = assemble_curves(sys, cfg.params, uc, cfg.n_max, cfg.alpha_max, cfg.m_max,
                                        R4s, grid);
    std::string csv = "R4,channel_kind,alpha,index,U,Q,W,W_scaled\n";
    for (const auto& c : curves) {
        const bool tri = c.channel.is_trimer();
        for (std::size_t i = 0; i < c.R4_grid.size(); ++i) {
            const double R4 = c.R4_grid[i];
            csv += fmt_sci(R4);
            csv += tri ? ",trimer," : ",continuum,";
            csv += std::to_string(tri ? 0 : c.channel.alpha) + "," + std::to_string(c.sublevel) +
                   "," + fmt_sci(c.U[i]) + "," + fmt_sci(c.Q[i]) + "," + fmt_sci(c.W[i]) + "," +
                   fmt_sci(2.0 * sys.mu4 * R4 * R4 * c.W[i]) + "\n";
        }
    }
    detail::write_file(opt.out_dir + "/potentials.csv", csv);
}

inline void run_peaks(const RunConfig& cfg, const RunOptions& opt) {
    const auto sys = cfg.system();
    const auto uc = UniversalConstants::compute(cfg.alpha_max);
    std::string csv = "alpha,m,n,R4c,lambda_c,E_peak_formula,E_peak_numeric\n";
    for (int a = 1; a <= cfg.alpha_max; ++a)
        for (int m = 0; m <= cfg.m_max; ++m)
            for (int n = 1; n <= cfg.n_max; ++n) {
                const auto ca = crossing_analytic(n, ChannelId::continuum(a, m), sys, cfg.params, uc);
                csv += std::to_string(a) + "," + std::to_string(m) + "," + std::to_string(n) + "," +
                       fmt_sci(ca.R4c) + "," + fmt_sci(ca.lambda_c) + "," + fmt_sci(ca.W_c) + ",";
                if (opt.numeric_crossings) {
                    const auto cn = crossing_numeric(n, ChannelId::continuum(a, m), sys, cfg.params, uc);
                    if (cn) csv += fmt_sci(cn->W_c);
                }
                csv += "\n";
            }
    detail::write_file(opt.out_dir + "/peaks.csv", csv);
}

inline nlohmann::json run_spectrum(const RunConfig& cfg, const RunOptions& opt) {
    const auto sys = cfg.system();
    const auto uc = UniversalConstants::compute(cfg.alpha_max);
    ChannelSetBounds bounds{cfg.alpha_max, cfg.m_max, cfg.n_max};
    std::vector<Crossing> crossings;
    if (opt.numeric_crossings) {
        for (int a = 1; a <= cfg.alpha_max; ++a)
            for (int m = 0; m <= cfg.m_max; ++m)
                for (int n = 1; n <= cfg.n_max; ++n) {
                    const auto cn = crossing_numeric(n, ChannelId::continuum(a, m), sys, cfg.params, uc);
                    if (cn) crossings.push_back(*cn);
                }
        if (crossings.empty()) throw convergence_error("spectrum: no numeric crossings found");
    } else {
        crossings = build_crossing_set(bounds, sys, cfg.params, uc);
    }
    const auto E = log_grid(cfg.E_min, cfg.E_max, cfg.E_points);
    const auto sp = build_spectrum(E, crossings, sys, cfg.params, uc);
    std::string csv = "E,P_T,K4\n";
    for (std::size_t i = 0; i < sp.E_grid.size(); ++i)
        csv += fmt_sci(sp.E_grid[i]) + "," + fmt_sci(sp.P_T[i]) + "," + fmt_sci(sp.K4[i]) + "\n";
    detail::write_file(opt.out_dir + "/spectrum.csv", csv);

    nlohmann::json extra;
    extra["E_window_lo"] = sp.E_window_lo;
    extra["E_window_hi"] = sp.E_window_hi;
    nlohmann::json peaks = nlohmann::json::array();
    for (const auto& r : sp.peaks) {
        nlohmann::json pk;
        pk["alpha"] = r.alpha;
        pk["m"] = r.m;
        pk["n"] = r.n;
        pk["R4c"] = r.R4c;
        pk["W_c"] = r.W_c;
        pk["E_peak"] = r.E_peak;
        peaks.push_back(pk);
    }
    extra["peaks"] = peaks;
    return extra;
}

inline void run_threshold(const RunConfig& cfg, const RunOptions& opt) {
    const auto sys = cfg.system();
    const auto uc = UniversalConstants::compute(cfg.alpha_max);
    const auto model0 = make_threshold_model(cfg.threshold_n, sys, cfg.params, uc); // mode check
    if (!(cfg.a_sweep_min > 0) || !(cfg.a_sweep_max > cfg.a_sweep_min))
        throw validation_error("threshold: a_AA sweep range must be positive and ordered");
    std::string csv = "a_AA,k,P,K4,oscillation_index\n";
    for (int i = 0; i < cfg.a_sweep_points; ++i) {
        const double a = cfg.a_sweep_min *
                         std::pow(cfg.a_sweep_max / cfg.a_sweep_min,
                                  static_cast<double>(i) / (cfg.a_sweep_points - 1));
        ThresholdModel m = model0;
        m.a_AA = -a;
        const double k = 1.0 / a; // threshold-regime evaluation point
        const double P = threshold_probability(k, m);
        const double K4 = P / std::pow(k, 7.0);
        const int osc = count_oscillations(m, cfg.a_sweep_min, a);
        csv += fmt_sci(-a) + "," + fmt_sci(k) + "," + fmt_sci(P) + "," + fmt_sci(K4) + "," +
               std::to_string(osc) + "\n";
    }
    detail::write_file(opt.out_dir + "/threshold.csv", csv);
}

/// Dispatch a subcommand; returns the process exit status (0 ok,
/// 1 validation error, 2 numerical failure).
inline int run_subcommand(const std::string& name, const RunConfig& cfg, const RunOptions& opt,
                          std::ostream& out = std::cout, std::ostream& log = std::cerr) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(opt.out_dir);
        for (const auto& d : cfg.defaults_applied) log << "default applied: " << d << "\n";
        nlohmann::json extra;
        if (name == "constants")
            run_constants(cfg, opt, out);
        else if (name == "potentials")
            run_potentials(cfg, opt);
        else if (name == "peaks")
            run_peaks(cfg, opt);
        else if (name == "spectrum")
            extra = run_spectrum(cfg, opt);
        else if (name == "threshold")
            run_threshold(cfg, opt);
        else
            throw validation_error("unknown subcommand '" + name + "'");
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        detail::write_sidecar(opt.out_dir, name, cfg, ms, extra);
        return 0;
    } catch (const validation_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const mode_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const domain_error& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) { // convergence, numerical, unsupported
        log << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace efimov4

#endif
