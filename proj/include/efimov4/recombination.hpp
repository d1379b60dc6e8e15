#ifndef EFIMOV4_RECOMBINATION_HPP
#define EFIMOV4_RECOMBINATION_HPP

/*  Landau-Zener recombination model.  Each (continuum, trimer) channel pair
 *  contributes through its single curve crossing: P_LZ = 4T(1-T) with the
 *  relative-phase factor cos^2(dphi) set to one (the potentials are nearly
 *  parallel at the crossings), and P_LZ = 0 for energetically closed
 *  crossings.  The rate proxy is K4 = P_T / k^7, k = sqrt(2 mu4 E), in
 *  arbitrary units (proportionality constant 1).
 */

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "efimov4/channels.hpp"
#include "efimov4/errors.hpp"
#include "efimov4/system.hpp"
#include "efimov4/universal.hpp"

namespace efimov4 {

/// Landau-Zener single-traversal amplitude T at an energetically open
/// crossing; the local wave number k_c = sqrt(2 mu4 (E - W_c)) vanishes at
/// threshold, driving T -> 0 there.
inline double lz_T(double E, const Crossing& c, const ParticleSystem& sys, const ModelParams& p,
                   const UniversalConstants& uc) {
    if (!(E > c.W_c))
        throw validation_error("lz_T: crossing is energetically closed (E <= W_c); gate on openness");
    const double pi = std::numbers::pi;
    const double k_c = std::sqrt(2.0 * sys.mu4 * (E - c.W_c));
    const double geom = (sys.mu3 / sys.mu_AB) * (p.a_AB / c.R4c);
    const double expo = -std::sqrt(sys.mu3 / sys.mu4) * geom * geom * p.beta * p.beta /
                        (k_c * p.R0) * 2.0 * pi / (2.0 * (uc.s0 / pi) * c.lambda_c + 0.25);
    return std::exp(expo);
}

/// P_LZ = 4T(1-T): in and out through the same crossing.
inline double p_lz(double T) {
    if (!(T >= 0.0) || !(T <= 1.0))
        throw validation_error("p_lz: T must lie in [0,1], got " + std::to_string(T));
    return 4.0 * T * (1.0 - T);
}

struct ChannelSetBounds {
    int alpha_max = 2;
    int m_max = 2;
    int n_max = 6;
};

/// One crossing per (initial continuum, final trimer) pair.
inline std::vector<Crossing> build_crossing_set(const ChannelSetBounds& b, const ParticleSystem& sys,
                                                const ModelParams& p, const UniversalConstants& uc) {
    if (b.alpha_max < 1 || b.m_max < 0 || b.n_max < 1)
        throw validation_error("build_crossing_set: empty channel set");
    std::vector<Crossing> cs;
    for (int a = 1; a <= b.alpha_max; ++a)
        for (int m = 0; m <= b.m_max; ++m)
            for (int n = 1; n <= b.n_max; ++n)
                cs.push_back(crossing_analytic(n, ChannelId::continuum(a, m), sys, p, uc));
    return cs;
}

/// Total recombination probability at energy E: sum of the open-crossing
/// Landau-Zener contributions over the pair set.
inline double total_probability(double E, const std::vector<Crossing>& crossings,
                                const ParticleSystem& sys, const ModelParams& p,
                                const UniversalConstants& uc) {
    if (crossings.empty()) throw validation_error("total_probability: empty channel set");
    double sum = 0;
    for (const auto& c : crossings)
        if (E > c.W_c) sum += p_lz(lz_T(E, c, sys, p, uc));
    return sum;
}

struct PeakRecord {
    int alpha = 0, m = 0, n = 0; // attribution
    double R4c = 0, W_c = 0, lambda_c = 0;
    double E_peak = 0; // grid position of this pair's maximum contribution
};

struct Spectrum {
    std::vector<double> E_grid;
    std::vector<double> P_T;
    std::vector<double> K4;
    std::vector<PeakRecord> peaks;
    double E_window_lo = 0; // validity window (2 mu4 a_AA^2)^-1 .. (2 mu4 a_AB^2)^-1
    double E_window_hi = 0;
};

/// K4 = P_T / (2 mu4 E)^(7/2), arbitrary units.
inline std::vector<double> k4_rate(const std::vector<double>& E_grid,
                                   const std::vector<double>& P_T, const ParticleSystem& sys) {
    if (E_grid.size() != P_T.size()) throw validation_error("k4_rate: grid size mismatch");
    std::vector<double> K4(E_grid.size());
    for (std::size_t i = 0; i < E_grid.size(); ++i) {
        if (!(E_grid[i] > 0)) throw validation_error("k4_rate: energies must be positive");
        K4[i] = P_T[i] / std::pow(2.0 * sys.mu4 * E_grid[i], 3.5);
    }
    return K4;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0) || !(hi > lo) || points < 2) throw validation_error("log_grid: bad range");
    std::vector<double> g(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    return g;
}

/// P_T and K4 over a log-spaced energy grid with per-pair peak attribution.
inline Spectrum build_spectrum(const std::vector<double>& E_grid,
                               const std::vector<Crossing>& crossings, const ParticleSystem& sys,
                               const ModelParams& p, const UniversalConstants& uc) {
    Spectrum sp;
    sp.E_grid = E_grid;
    sp.P_T.assign(E_grid.size(), 0.0);
    for (const auto& c : crossings) {
        double best = 0;
        std::size_t best_i = 0;
        bool any = false;
        for (std::size_t i = 0; i < E_grid.size(); ++i) {
            if (!(E_grid[i] > c.W_c)) continue;
            const double contrib = p_lz(lz_T(E_grid[i], c, sys, p, uc));
            sp.P_T[i] += contrib;
            if (contrib > best) {
                best = contrib;
                best_i = i;
                any = true;
            }
        }
        if (any && c.W_c >= E_grid.front() && c.W_c <= E_grid.back()) {
            PeakRecord rec;
            rec.alpha = c.initial.alpha;
            rec.m = c.initial.m;
            rec.n = c.final_n;
            rec.R4c = c.R4c;
            rec.W_c = c.W_c;
            rec.lambda_c = c.lambda_c;
            rec.E_peak = E_grid[best_i];
            sp.peaks.push_back(rec);
        }
    }
    sp.K4 = k4_rate(sp.E_grid, sp.P_T, sys);
    sp.E_window_lo = p.a_AA ? 1.0 / (2.0 * sys.mu4 * (*p.a_AA) * (*p.a_AA)) : 0.0;
    sp.E_window_hi = 1.0 / (2.0 * sys.mu4 * p.a_AB * p.a_AB);
    return sp;
}

// --------------------------------------------------------------- threshold

/// Zero-energy threshold model for finite negative a_AA: P is proportional
/// to (k |a_AA|)^7 sin^2(k_n |a_AA| + Phi), so K4 = P/k^7 is k-independent.
struct ThresholdModel {
    int n = 1;
    double a_AA = 0; // finite negative
    double Phi = 0;
    double k_n = 0; // final-trimer wave number at E = 0
    double amplitude = 1.0;
};

inline ThresholdModel make_threshold_model(int n, const ParticleSystem& sys, const ModelParams& p,
                                           const UniversalConstants& uc) {
    if (n < 1) throw validation_error("make_threshold_model: n must be >= 1");
    if (!p.a_AA) throw mode_error("threshold model undefined for infinite a_AA");
    ThresholdModel m;
    m.n = n;
    m.a_AA = *p.a_AA;
    m.Phi = p.Phi;
    m.k_n = 2.0 / p.R0 * (sys.mu4 / sys.mu3) *
            std::exp(-(n * std::numbers::pi + uc.gamma) / uc.s0);
    return m;
}

inline double threshold_probability(double k, const ThresholdModel& m) {
    if (!(k > 0)) throw validation_error("threshold_probability: k must be positive");
    if (!(m.a_AA < 0)) throw mode_error("threshold_probability: a_AA must be finite negative");
    const double a = std::fabs(m.a_AA);
    const double s = std::sin(m.k_n * a + m.Phi);
    return m.amplitude * std::pow(k * a, 7.0) * s * s;
}

/// Number of maxima of sin^2(k_n a + Phi) for a in [a_lo, a_hi]: the count
/// of solutions of k_n a + Phi = pi/2 + j pi in the range.
inline int count_oscillations(const ThresholdModel& m, double a_lo, double a_hi) {
    if (!(a_lo > 0) || !(a_hi >= a_lo)) throw validation_error("count_oscillations: bad range");
    if (a_lo == a_hi) return 0;
    const double pi = std::numbers::pi;
    const double j_lo = std::ceil((m.k_n * a_lo + m.Phi - pi / 2) / pi);
    const double j_hi = std::floor((m.k_n * a_hi + m.Phi - pi / 2) / pi);
    return std::max(0, static_cast<int>(j_hi - j_lo) + 1);
}

} // namespace efimov4

#endif
