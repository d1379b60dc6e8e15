#ifndef EFIMOV4_CHANNELS_HPP
#define EFIMOV4_CHANNELS_HPP

/*  Adiabatic channel potentials versus the hyperradius R4:
 *
 *      U  = (lambda^2 - 1/4) / (2 mu4 R4^2)        from the hyperangular
 *                                                   eigenvalue
 *      Q  = <du/dR4 | du/dR4>                       diagonal correction,
 *                                                   central differences in R4
 *      W  = U - Q/(2 mu4)                           physical potential
 *
 *  plus the closed-form crossing geometry between atom-trimer and
 *  continuum channels and a numeric crossing search on the W curves.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "efimov4/eigen.hpp"
#include "efimov4/errors.hpp"
#include "efimov4/system.hpp"
#include "efimov4/universal.hpp"

namespace efimov4 {

struct PotentialCurve {
    ChannelId channel;
    int sublevel = 0; // n for trimer curves, m for continuum curves
    std::vector<double> R4_grid;
    std::vector<double> U, Q, W;
    std::optional<double> trimer_energy; // large-R4 limit of U, trimer only
};

struct Crossing {
    ChannelId initial; // continuum channel
    int final_n = 0;   // trimer index
    double R4c = 0;
    double W_c = 0;
    double lambda_c = 0;
    enum class Source { analytic_formula, numeric_root } source = Source::analytic_formula;
};

inline double curve_U(double lambda_sq, double R4, const ParticleSystem& sys) {
    return (lambda_sq - 0.25) / (2.0 * sys.mu4 * R4 * R4);
}

// ------------------------------------------------------ per-point assembly

struct ChannelPointValues {
    std::vector<double> lambda_sq; // per sublevel (index 0 = lowest)
    std::vector<double> U, Q, W;
    std::vector<double> overlap;   // plus/minus eigenfunction overlaps
    std::vector<double> norm_der;  // <u | du/dR4>, available when center vectors kept
};

namespace detail {

struct QIntegrals {
    double Q = 0, overlap = 0, norm_der = 0;
};

// central-difference Q on the center solution's grid; the (1+h) and (1-h)
// functions are both interpolated onto it (symmetric treatment keeps the
// difference even in h_rel) and extended by zero below their own
// alpha_min.  The trapezoid quadrature excludes the two boundary points;
// the left margin is widened, if needed, so that it always covers the
// interval swept by the moving wall, where the raw derivative spikes.
inline QIntegrals q_from_solutions(const ChannelSolution& plus, const ChannelSolution& minus,
                                   const ChannelSolution& center, int k, double R4,
                                   double h_rel) {
    const auto& ag = center.alpha_grid;
    const int M = static_cast<int>(ag.size());
    int i0 = 1;
    const double wall_x = minus.x_min + 0.25 * center.h;
    while (i0 + 2 < M && center.x_min + i0 * center.h <= wall_x) ++i0;

    std::vector<double> up(M), um(M);
    for (int i = 0; i < M; ++i) {
        up[i] = plus.interpolate(k, ag[i]);
        um[i] = minus.interpolate(k, ag[i]);
    }
    double ov = 0;
    for (int i = 0; i + 1 < M; ++i)
        ov += 0.5 * (up[i] * um[i] + up[i + 1] * um[i + 1]) * (ag[i + 1] - ag[i]);
    const double sign = (ov < 0) ? -1.0 : 1.0;
    if (std::fabs(ov) < 0.1)
        throw numerical_error("potential_Q: sign-alignment ambiguity (|overlap| = " +
                              std::to_string(std::fabs(ov)) + ")");

    const double den = 2.0 * h_rel * R4;
    QIntegrals out;
    out.overlap = std::fabs(ov);
    const bool have_center = !center.eigenfunctions.empty();
    for (int i = i0; i + 2 < M; ++i) {
        const double d0 = (up[i] - sign * um[i]) / den;
        const double d1 = (up[i + 1] - sign * um[i + 1]) / den;
        out.Q += 0.5 * (d0 * d0 + d1 * d1) * (ag[i + 1] - ag[i]);
        if (have_center) {
            const auto& ucen = center.eigenfunctions[k];
            out.norm_der += 0.5 * (ucen[i] * d0 + ucen[i + 1] * d1) * (ag[i + 1] - ag[i]);
        }
    }
    return out;
}

} // namespace detail

/// U, Q, W for every sublevel of one channel family at a single R4.
/// Three eigen solves total: center (eigenvalues) and R4*(1 +- h_rel)
/// (eigenfunctions for the R4 derivative), all sharing one truncation point.
inline ChannelPointValues assemble_point(const ChannelId& family, int count, double R4,
                                         const ParticleSystem& sys, const ModelParams& p,
                                         const UniversalConstants& uc, const GridSpec& grid = {},
                                         double h_rel = 1e-3, bool keep_center_vectors = false) {
    if (!(h_rel > 0) || !(h_rel < 0.1)) throw validation_error("assemble_point: bad h_rel");
    const auto ep = EigenProblem::make(family, R4, sys, p, uc);
    GridSpec g0 = grid;
    g0.want_vectors = keep_center_vectors;
    const auto center = eigenvalues_numeric(ep, count, g0);

    GridSpec g1 = grid;
    g1.x_max_override = center.x_max;
    const auto plus = eigenvalues_numeric(
        EigenProblem::make(family, R4 * (1.0 + h_rel), sys, p, uc), count, g1);
    const auto minus = eigenvalues_numeric(
        EigenProblem::make(family, R4 * (1.0 - h_rel), sys, p, uc), count, g1);

    ChannelPointValues out;
    out.lambda_sq = center.lambda_sq;
    for (int k = 0; k < count; ++k) {
        const auto qi = detail::q_from_solutions(plus, minus, center, k, R4, h_rel);
        const double Uk = curve_U(center.lambda_sq[k], R4, sys);
        out.U.push_back(Uk);
        out.Q.push_back(qi.Q);
        out.W.push_back(Uk - qi.Q / (2.0 * sys.mu4));
        out.overlap.push_back(qi.overlap);
        out.norm_der.push_back(qi.norm_der);
    }
    return out;
}

/// Adiabatic potential from the hyperangular eigenvalue (single sublevel).
inline double potential_U(const ChannelId& ch, double R4, const ParticleSystem& sys,
                          const ModelParams& p, const UniversalConstants& uc,
                          const GridSpec& grid = {}) {
    const auto ep = EigenProblem::make(ch, R4, sys, p, uc);
    GridSpec g = grid;
    g.want_vectors = false;
    const auto sol = eigenvalues_numeric(ep, ch.sublevel_index(), g);
    return curve_U(sol.lambda_sq.back(), R4, sys);
}

/// Diagonal coupling <du/dR4|du/dR4> by central differences (single sublevel).
inline double potential_Q(const ChannelId& ch, double R4, const ParticleSystem& sys,
                          const ModelParams& p, const UniversalConstants& uc,
                          const GridSpec& grid = {}, double h_rel = 1e-3) {
    const auto v = assemble_point(ch, ch.sublevel_index(), R4, sys, p, uc, grid, h_rel);
    return v.Q.back();
}

/// W = U - Q/(2 mu4) (single sublevel).
inline double potential_W(const ChannelId& ch, double R4, const ParticleSystem& sys,
                          const ModelParams& p, const UniversalConstants& uc,
                          const GridSpec& grid = {}, double h_rel = 1e-3) {
    const auto v = assemble_point(ch, ch.sublevel_index(), R4, sys, p, uc, grid, h_rel);
    return v.W.back();
}

/// Closed-form large-R4 estimate of the positive part of a trimer W curve.
inline double asymptotic_W_bound(int n, double R4, const ParticleSystem& sys,
                                 const ModelParams& p, const UniversalConstants& uc,
                                 bool* range_warning = nullptr) {
    if (n < 1) throw validation_error("asymptotic_W_bound: n must be >= 1");
    if (range_warning) *range_warning = (R4 <= 10.0 * p.R0);
    const double pi = std::numbers::pi;
    const double bracket = (2.0 * (n + uc.gamma) - uc.s0) / pi + 0.5 -
                           uc.s0 / pi * std::log(sys.mu4 * R4 * R4 / (sys.mu3 * p.R0 * p.R0));
    return bracket / (2.0 * sys.mu4 * R4 * R4);
}

/// Closed-form peak/crossing energy W_nu(R4c) for trimer n and continuum
/// channel (alpha, m).
inline double peak_energy(int n, int alpha, int m, const ParticleSystem& sys,
                          const ModelParams& p, const UniversalConstants& uc) {
    if (n < 1 || alpha < 1 || m < 0) throw validation_error("peak_energy: bad channel indices");
    const double pi = std::numbers::pi;
    const double L = uc.s_of(alpha) + 2.0 * m + 1.5;
    return L * L / (2.0 * sys.mu34 * p.R0 * p.R0) *
           std::exp(-pi / uc.s0 *
                    (2.0 * n - uc.s_of(alpha) - 2.0 * m + (2.0 * uc.gamma - uc.s0) / pi - 1.0));
}

/// Closed-form crossing position and data for trimer n against a continuum
/// channel.
inline Crossing crossing_analytic(int n, const ChannelId& initial, const ParticleSystem& sys,
                                  const ModelParams& p, const UniversalConstants& uc) {
    if (initial.is_trimer()) throw validation_error("crossing_analytic: initial must be a continuum channel");
    if (n < 1) throw validation_error("crossing_analytic: n must be >= 1");
    const double pi = std::numbers::pi;
    const double L = uc.s_of(initial.alpha) + 2.0 * initial.m + 1.5;
    const double lam_c = std::sqrt(L * L - 0.25);
    Crossing c;
    c.initial = initial;
    c.final_n = n;
    c.lambda_c = lam_c;
    c.R4c = p.R0 * std::sqrt(sys.mu3 / sys.mu4) *
            std::exp(pi / uc.s0 * (n - 0.5 * lam_c + (2.0 * uc.gamma - uc.s0) / (2.0 * pi) + 0.25));
    c.W_c = peak_energy(n, initial.alpha, initial.m, sys, p, uc);
    c.source = Crossing::Source::analytic_formula;
    return c;
}

/// Root of the scaled difference 2 mu4 R4^2 (W_trimer,n - W_continuum).
/// The default bracket is the analytic estimate over/under by a factor 10,
/// clamped above the hard core; no sign change means no crossing (required
/// for the lowest trimer channels).  The outermost sign change in the
/// bracket is taken: that is the crossing an incoming collision reaches
/// first, and trimer curves can also poke through a continuum curve in the
/// near-core region well inside it.
inline std::optional<Crossing> crossing_numeric(int n, const ChannelId& initial,
                                                const ParticleSystem& sys, const ModelParams& p,
                                                const UniversalConstants& uc,
                                                double bracket_lo = 0, double bracket_hi = 0,
                                                const GridSpec& grid = {}, int scan_points = 33,
                                                double h_rel = 1e-3) {
    if (initial.is_trimer()) throw validation_error("crossing_numeric: initial must be a continuum channel");
    const auto analytic = crossing_analytic(n, initial, sys, p, uc);
    const double wall = core_wall(sys, p);
    double lo = bracket_lo > 0 ? bracket_lo : analytic.R4c / 10.0;
    double hi = bracket_hi > 0 ? bracket_hi : analytic.R4c * 10.0;
    lo = std::max(lo, wall * (1.0 + 4.0 * h_rel)); // keep the R4(1-h) probe outside the core
    if (!(hi > lo)) return std::nullopt;           // bracket entirely inside the core

    const int mcount = initial.m + 1;
    // returns {scaled difference, scaled continuum W} (the comparison scale)
    auto scaled_diff = [&](double R4) {
        const auto t = assemble_point(ChannelId::trimer(n), n, R4, sys, p, uc, grid, h_rel);
        const auto c = assemble_point(initial, mcount, R4, sys, p, uc, grid, h_rel);
        const double s = 2.0 * sys.mu4 * R4 * R4;
        return std::pair<double, double>(s * (t.W[n - 1] - c.W[mcount - 1]),
                                         std::fabs(s * c.W[mcount - 1]));
    };

    const double llo = std::log(lo), lhi = std::log(hi);
    double a = 0, b = 0, fa = 0;
    bool found = false;
    double prev_x = lo, prev_f = scaled_diff(lo).first;
    for (int i = 1; i < scan_points; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / (scan_points - 1));
        const double f = scaled_diff(x).first;
        if (prev_f == 0.0 || (prev_f > 0) != (f > 0)) {
            a = prev_x;
            b = x;
            fa = prev_f;
            found = true; // keep scanning: the outermost sign change wins
        }
        prev_x = x;
        prev_f = f;
    }
    if (!found) return std::nullopt;

    for (int it = 0; it < 80; ++it) {
        const double m = std::sqrt(a * b);
        const auto [fm, scale] = scaled_diff(m);
        if (fm == 0.0) {
            a = b = m;
            break;
        }
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (std::fabs(fm) <= 1e-8 * scale) break; // both W values equal to 1e-8 relative
        if ((b - a) <= 1e-12 * b) break;
    }
    const double R4c = std::sqrt(a * b);
    const auto t = assemble_point(ChannelId::trimer(n), n, R4c, sys, p, uc, grid);
    const auto cc = assemble_point(initial, mcount, R4c, sys, p, uc, grid);
    Crossing c;
    c.initial = initial;
    c.final_n = n;
    c.R4c = R4c;
    c.W_c = 0.5 * (t.W[n - 1] + cc.W[mcount - 1]);
    c.lambda_c = std::sqrt(std::max(cc.lambda_sq[mcount - 1], 0.0));
    c.source = Crossing::Source::numeric_root;
    return c;
}

/// Per-channel potential curves over an R4 grid (one eigen-solve triple per
/// family and grid point covers all sublevels).
inline std::vector<PotentialCurve> assemble_curves(const ParticleSystem& sys, const ModelParams& p,
                                                   const UniversalConstants& uc, int n_max,
                                                   int alpha_max, int m_max,
                                                   const std::vector<double>& R4_grid,
                                                   const GridSpec& grid = {}) {
    std::vector<PotentialCurve> curves;
    auto family_curves = [&](const ChannelId& family, int count) {
        std::vector<PotentialCurve> cs(count);
        for (int k = 0; k < count; ++k) {
            cs[k].channel = family.is_trimer() ? ChannelId::trimer(k + 1)
                                               : ChannelId::continuum(family.alpha, k);
            cs[k].sublevel = family.is_trimer() ? k + 1 : k;
        }
        for (double R4 : R4_grid) {
            const auto v = assemble_point(family, count, R4, sys, p, uc, grid);
            for (int k = 0; k < count; ++k) {
                cs[k].R4_grid.push_back(R4);
                cs[k].U.push_back(v.U[k]);
                cs[k].Q.push_back(v.Q[k]);
                cs[k].W.push_back(v.W[k]);
            }
        }
        for (int k = 0; k < count; ++k) {
            if (family.is_trimer() && !cs[k].U.empty() && cs[k].U.back() < 0)
                cs[k].trimer_energy = cs[k].U.back();
            curves.push_back(std::move(cs[k]));
        }
    };
    family_curves(ChannelId::trimer(1), n_max);
    for (int a = 1; a <= alpha_max; ++a) family_curves(ChannelId::continuum(a, 0), m_max + 1);
    return curves;
}

} // namespace efimov4

#endif
