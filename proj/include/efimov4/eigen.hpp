#ifndef EFIMOV4_EIGEN_HPP
#define EFIMOV4_EIGEN_HPP

/*  Hyperangular eigenproblem on [alpha_min, pi/2], Dirichlet both ends:
 *
 *      -u'' + strength/sin^2(a4) u = lambda^2 u
 *
 *  strength = -(s0^2 + 1/4) for atom-trimer channels (attractive, the
 *  log-periodic regime near a4 -> 0), +(s_alpha^2 - 1/4) for four-body
 *  continuum channels (repulsive).
 *
 *  Two independent solvers:
 *
 *  1. closed form -- the hypergeometric solution regular at pi/2,
 *         u = cos(a4) sin^(1/2+is)(a4) 2F1(3/4+is/2-l/2, 3/4+is/2+l/2; 3/2; cos^2 a4)
 *     with s = s0 (trimer) or the substitution s -> i s_alpha (continuum,
 *     all parameters real).  Eigenvalues are roots of u(alpha_min) = 0.
 *     Reliable for |lambda| below a ceiling (default 30); beyond that the
 *     series parameters grow and accuracy degrades.
 *
 *  2. Sturm-Liouville discretization -- the production path, covering any
 *     lambda^2 including the deeply bound trimer region.  In the variable
 *     x = ln tan(a4) with u = sqrt(sin 2a4) v the equation becomes
 *
 *         -v'' + [1/4 + rho + strength*c2] v = lambda^2 rho v,
 *         rho = sin^2 a4 cos^2 a4,   c2 = cos^2 a4,
 *
 *     a generalized symmetric tridiagonal problem with diagonal weight,
 *     reduced to standard form by the similarity D^(-1/2) A D^(-1/2).
 *     A uniform x grid resolves both the log-periodic oscillations near
 *     the wall (period 2pi/s0 in x) and the regular endpoint at pi/2,
 *     where v ~ exp(-x/2); the domain is truncated at x_max with the
 *     truncation error ~exp(-(x_max - ln 2|lambda|)) kept below 1e-11.
 *     Eigenvalues by Sturm-sequence bisection, eigenvectors by inverse
 *     iteration, optional Richardson extrapolation (the scheme is second
 *     order in the grid step).
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "efimov4/errors.hpp"
#include "efimov4/hyp2f1.hpp"
#include "efimov4/rootfind.hpp"
#include "efimov4/system.hpp"
#include "efimov4/universal.hpp"

namespace efimov4 {

struct EigenProblem {
    ChannelId channel;
    double R4 = 0;
    double alpha_min = 0;
    double strength = 0; // coefficient of 1/sin^2

    static EigenProblem make(const ChannelId& ch, double R4, const ParticleSystem& sys,
                             const ModelParams& p, const UniversalConstants& uc) {
        EigenProblem ep;
        ep.channel = ch;
        ep.R4 = R4;
        ep.alpha_min = efimov4::alpha_min(R4, sys, p);
        if (ch.is_trimer())
            ep.strength = -(uc.s0 * uc.s0 + 0.25);
        else {
            const double sa = uc.s_of(ch.alpha);
            ep.strength = sa * sa - 0.25;
        }
        return ep;
    }

    /// the channel constant implied by strength (s0 or s_alpha)
    double s_constant() const {
        return channel.is_trimer() ? std::sqrt(-strength - 0.25) : std::sqrt(strength + 0.25);
    }
};

// ---------------------------------------------------------------- closed form

/// Unnormalized channel function of the closed-form route.  For continuum
/// channels the substitution s -> i s_alpha makes every parameter real.
inline std::complex<double> u_closed_form(const ChannelId& ch, std::complex<double> lambda,
                                          double alpha4, double s_constant) {
    if (!(alpha4 > 0.0) || !(alpha4 <= std::numbers::pi / 2 * (1 + 1e-15)))
        throw domain_error("u_closed_form: alpha4 outside (0, pi/2]");
    const double sn = std::sin(alpha4);
    const double cs = std::cos(alpha4);
    const double z = cs * cs;
    const double zc = sn * sn;
    const std::complex<double> half(0.5, 0.0);
    std::complex<double> a, b, pref;
    if (ch.is_trimer()) {
        const std::complex<double> is_half(0.0, s_constant / 2.0);
        a = 0.75 + is_half - lambda / 2.0;
        b = 0.75 + is_half + lambda / 2.0;
        pref = cs * std::exp((half + 2.0 * is_half) * std::log(sn));
    } else {
        a = 0.75 - s_constant / 2.0 - lambda / 2.0;
        b = 0.75 - s_constant / 2.0 + lambda / 2.0;
        pref = cs * std::pow(sn, 0.5 - s_constant);
    }
    return pref * detail::hyp2f1_zc(a, b, std::complex<double>(1.5, 0.0), z, zc);
}

struct ClosedFormOptions {
    double lambda_ceiling = 30.0; // documented reliability ceiling on |lambda|
    double tol = 1e-12;
};

namespace detail {

inline std::complex<double> lambda_of(double lambda_sq) {
    return std::sqrt(std::complex<double>(lambda_sq, 0.0));
}

// boundary residual as a function of lambda^2.  Continuum: the (real)
// hypergeometric factor at alpha_min, positive prefactors stripped.
// Trimer: the solution space regular at pi/2 is one-dimensional, so
// u = Z * g with g real; Re[u(a_min) conj(u(a_ref))] = |Z|^2 g(a_min) g(a_ref)
// is real-analytic in lambda^2 and vanishes at eigenvalues (g(a_min) = 0)
// and at reference-point nodes (g(a_ref) = 0), told apart after refinement.
struct ClosedResidual {
    const EigenProblem& ep;
    double a_ref;

    double operator()(double lambda_sq) const {
        const std::complex<double> lam = lambda_of(lambda_sq);
        if (ep.channel.is_trimer()) {
            const std::complex<double> ua = u_closed_form(ep.channel, lam, ep.alpha_min, ep.s_constant());
            const std::complex<double> ur = u_closed_form(ep.channel, lam, a_ref, ep.s_constant());
            return (ua * std::conj(ur)).real();
        }
        const double s = ep.s_constant();
        const std::complex<double> a = 0.75 - s / 2.0 - lam / 2.0;
        const std::complex<double> b = 0.75 - s / 2.0 + lam / 2.0;
        const double sn = std::sin(ep.alpha_min), cs = std::cos(ep.alpha_min);
        return hyp2f1_zc(a, b, {1.5, 0.0}, cs * cs, sn * sn).real();
    }

    bool genuine_root(double lambda_sq) const {
        if (!ep.channel.is_trimer()) return true;
        const std::complex<double> lam = lambda_of(lambda_sq);
        const double ua = std::abs(u_closed_form(ep.channel, lam, ep.alpha_min, ep.s_constant()));
        const double ur = std::abs(u_closed_form(ep.channel, lam, a_ref, ep.s_constant()));
        return ua <= ur; // else the zero came from the reference node
    }
};

} // namespace detail

/// Lowest `count` eigenvalues lambda^2 from the closed-form boundary
/// condition.  Throws if roots would exceed the reliability ceiling.
inline std::vector<double> eigenvalues_closed_form(const EigenProblem& ep, int count,
                                                   const ClosedFormOptions& opt = {}) {
    if (count < 1) throw validation_error("eigenvalues_closed_form: count must be >= 1");
    const double pi = std::numbers::pi;
    // phase-stripping reference point: 3/4 of the way to pi/2, where the
    // hypergeometric argument cos^2(a_ref) ~ 0.15 keeps the series well
    // conditioned (the interval midpoint would put it at ~0.5, the worst
    // point for the large-|lambda| parameter combinations)
    detail::ClosedResidual resid{ep, ep.alpha_min + 0.75 * (pi / 2 - ep.alpha_min)};

    std::vector<double> grid;
    if (ep.channel.is_trimer()) {
        // negative lambda^2 first: kappa = |lambda| scanned downward on a
        // log grid (bound roots are geometrically spaced in kappa)
        for (double k = opt.lambda_ceiling; k > 1e-4; k *= std::exp(-0.05))
            grid.push_back(-k * k);
        grid.push_back(-1e-9);
    }
    // positive region: uniform lambda scan
    for (double l = 0.02; l <= opt.lambda_ceiling; l += 0.05) grid.push_back(l * l);

    std::vector<double> roots;
    double prev_x = grid[0];
    double prev_f = resid(prev_x);
    for (std::size_t i = 1; i < grid.size() && static_cast<int>(roots.size()) < count; ++i) {
        const double x = grid[i];
        const double f = resid(x);
        if (prev_f == 0.0 || (prev_f > 0) != (f > 0)) {
            double r = (prev_f == 0.0) ? prev_x
                                       : bisect(resid, prev_x, x, prev_f, f, 200, 1e-15);
            if (resid.genuine_root(r)) roots.push_back(r);
        }
        prev_x = x;
        prev_f = f;
    }
    if (static_cast<int>(roots.size()) < count)
        throw convergence_error(
            "eigenvalues_closed_form: requested eigenvalue lies beyond the |lambda| <= " +
            std::to_string(opt.lambda_ceiling) + " reliability ceiling; use the numeric solver");
    roots.resize(count);
    return roots;
}

// ------------------------------------------------------------------- numeric

struct GridSpec {
    int points = 4001;       // interior nodes of the fine grid (forced odd)
    double x_max = 20.0;     // truncation of x = ln tan(a4); auto-extended
    bool richardson = true;  // extrapolate eigenvalues from the half grid
    bool want_vectors = true;
    double tol_rel = 1e-6;   // accuracy target for the discretization error
    bool strict = false;     // promote accuracy warnings to errors
    double x_max_override = 0; // >0: fix the truncation point exactly
};

struct ChannelSolution {
    EigenProblem problem;
    std::vector<double> lambda_sq;      // extrapolated when richardson is on
    std::vector<double> lambda_sq_grid; // raw fine-grid eigenvalues
    std::vector<double> alpha_grid;     // N+2 nodes including both endpoints
    std::vector<std::vector<double>> eigenfunctions; // unit trapezoid norm in alpha
    double x_min = 0, x_max = 0, h = 0; // fine grid geometry
    double error_rel = 0;               // max estimated relative eigenvalue error
    bool accuracy_warning = false;

    /// eigenfunction value at arbitrary alpha in (0,pi/2), zero below the
    /// channel's own alpha_min (4-point Lagrange on the uniform x grid)
    double interpolate(int k, double alpha) const {
        const double x = std::log(std::tan(alpha));
        if (x <= x_min || x >= x_max) return 0.0;
        const auto& u = eigenfunctions.at(k);
        const double s = (x - x_min) / h; // node index coordinate, 0..N+1
        int j = static_cast<int>(std::floor(s));
        j = std::clamp(j, 1, static_cast<int>(u.size()) - 3);
        const double t = s - j;
        const double um1 = u[j - 1], u0 = u[j], u1 = u[j + 1], u2 = u[j + 2];
        return u0 + t * ((-um1 / 3 - u0 / 2 + u1 - u2 / 6) +
                         t * ((um1 - 2 * u0 + u1) / 2 + t * ((u0 - u1) / 2 + (u2 - um1) / 6)));
    }
};

namespace detail {

struct Tridiag {
    std::vector<double> d; // diagonal
    std::vector<double> e; // off-diagonal, e[i] couples i and i+1
};

// standard-form matrix of the discretized weighted problem
inline Tridiag build_matrix(const EigenProblem& ep, double x_min, double x_max, int n) {
    Tridiag T;
    T.d.resize(n);
    T.e.resize(n - 1);
    const double h = (x_max - x_min) / (n + 1);
    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) {
        const double x = x_min + (i + 1) * h;
        const double t = std::exp(x);
        const double c2 = 1.0 / (1.0 + t * t);
        const double s2 = t * t * c2;
        rho[i] = s2 * c2;
        const double q = 0.25 + rho[i] + ep.strength * c2;
        T.d[i] = (2.0 / (h * h) + q) / rho[i];
    }
    for (int i = 0; i + 1 < n; ++i)
        T.e[i] = -1.0 / (h * h * std::sqrt(rho[i] * rho[i + 1]));
    return T;
}

// Sturm count: number of eigenvalues below sigma
inline int sturm_count(const Tridiag& T, double sigma) {
    int cnt = 0;
    double p = T.d[0] - sigma;
    if (p == 0.0) p = -1e-300;
    if (p < 0) ++cnt;
    const int n = static_cast<int>(T.d.size());
    for (int i = 1; i < n; ++i) {
        p = (T.d[i] - sigma) - T.e[i - 1] * T.e[i - 1] / p;
        if (p == 0.0) p = -1e-300;
        if (p < 0) ++cnt;
    }
    return cnt;
}

inline std::vector<double> sturm_eigenvalues(const Tridiag& T, int count) {
    const int n = static_cast<int>(T.d.size());
    double lo = T.d[0], hi = T.d[0];
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(T.e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(T.e[i]) : 0.0);
        lo = std::min(lo, T.d[i] - r);
        hi = std::max(hi, T.d[i] + r);
    }
    std::vector<double> out;
    double kth_lo = lo;
    for (int k = 1; k <= count; ++k) {
        double a = kth_lo, b = hi;
        for (int it = 0; it < 400; ++it) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            if (sturm_count(T, m) >= k)
                b = m;
            else
                a = m;
            if (b - a <= 1e-14 * std::max(1.0, std::fabs(m))) break;
        }
        out.push_back(0.5 * (a + b));
        kth_lo = a; // the (k+1)-th eigenvalue is not below this
    }
    return out;
}

// inverse iteration with partial-pivot tridiagonal elimination
inline std::vector<double> inverse_iteration(const Tridiag& T, double sigma) {
    const int n = static_cast<int>(T.d.size());
    std::vector<double> y(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        y[i] = 2.0 * (static_cast<double>(state >> 11) / 9007199254740992.0) - 1.0;
    }
    // factor (T - sigma) once with partial pivoting (dgttrf-style)
    std::vector<double> dl(std::max(n - 1, 0)), dd(n), du(std::max(n - 1, 0)), du2(std::max(n - 2, 0));
    std::vector<char> swapped(std::max(n - 1, 0), 0);
    for (int i = 0; i < n; ++i) dd[i] = T.d[i] - sigma;
    for (int i = 0; i + 1 < n; ++i) dl[i] = du[i] = T.e[i];
    for (int i = 0; i + 1 < n; ++i) {
        if (i + 2 < n) du2[i] = 0.0;
        if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
            if (dd[i] == 0.0) dd[i] = 1e-300;
            const double fac = dl[i] / dd[i];
            dl[i] = fac;
            dd[i + 1] -= fac * du[i];
        } else {
            swapped[i] = 1;
            const double fac = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fac;
            const double tmp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = tmp - fac * dd[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fac * du[i + 1];
            }
        }
    }
    if (dd[n - 1] == 0.0) dd[n - 1] = 1e-300;

    for (int pass = 0; pass < 3; ++pass) {
        // forward substitution with the recorded interchanges
        for (int i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                y[i + 1] -= dl[i] * y[i];
            } else {
                const double tmp = y[i];
                y[i] = y[i + 1];
                y[i + 1] = tmp - dl[i] * y[i];
            }
        }
        // back substitution
        y[n - 1] /= dd[n - 1];
        if (n >= 2) y[n - 2] = (y[n - 2] - du[n - 2] * y[n - 1]) / dd[n - 2];
        for (int i = n - 3; i >= 0; --i)
            y[i] = (y[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / dd[i];
        double mx = 0;
        for (double v : y) mx = std::max(mx, std::fabs(v));
        if (mx == 0.0) mx = 1.0;
        for (double& v : y) v /= mx;
    }
    return y;
}

} // namespace detail

/// Count strict sign changes over interior values, ignoring near-zero noise.
inline int count_interior_nodes(const std::vector<double>& u) {
    double mx = 0;
    for (double v : u) mx = std::max(mx, std::fabs(v));
    const double thr = 1e-9 * mx;
    int nodes = 0;
    double last = 0;
    for (double v : u) {
        if (std::fabs(v) <= thr) continue;
        if (last != 0 && (v > 0) != (last > 0)) ++nodes;
        last = v;
    }
    return nodes;
}

/// Lowest `count` eigenpairs from the Sturm-Liouville discretization.
inline ChannelSolution eigenvalues_numeric(const EigenProblem& ep, int count,
                                           const GridSpec& grid = {}) {
    if (count < 1) throw validation_error("eigenvalues_numeric: count must be >= 1");
    if (grid.points < 100) throw validation_error("eigenvalues_numeric: grid too small");
    const double pi = std::numbers::pi;

    ChannelSolution sol;
    sol.problem = ep;

    // x_min = ln tan(alpha_min), evaluated stably for small alpha_min
    const double c = std::sin(ep.alpha_min);
    const double x_min = std::log(c) - 0.5 * std::log1p(-c * c);

    double x_max = grid.x_max_override > 0 ? grid.x_max_override
                                           : std::max(grid.x_max, x_min + 2.0);
    if (grid.x_max_override <= 0) {
        // pre-pass on a coarse grid to size the truncation point from the
        // largest requested eigenvalue (truncation error ~ exp(-(x_max-x_t)))
        const int nc = 1601;
        auto Tc = detail::build_matrix(ep, x_min, x_max, nc);
        const double top = detail::sturm_eigenvalues(Tc, count).back();
        if (top > 1.0) {
            const double x_needed = std::log(2.0 * std::sqrt(top)) + 26.0;
            x_max = std::min(std::max(x_max, x_needed), 60.0);
        }
    }

    const int n = grid.points | 1; // odd so the half grid shares nodes
    const double h = (x_max - x_min) / (n + 1);
    sol.x_min = x_min;
    sol.x_max = x_max;
    sol.h = h;

    // resolution of the log-periodic region (trimer channels)
    if (ep.strength < 0) {
        const double s0_eff = std::sqrt(-ep.strength - 0.25);
        if (h > pi / s0_eff / 20.0) {
            sol.accuracy_warning = true;
            if (grid.strict)
                throw numerical_error("eigenvalues_numeric: grid step " + std::to_string(h) +
                                      " does not resolve the log-periodic oscillation");
        }
    }

    auto T = detail::build_matrix(ep, x_min, x_max, n);
    sol.lambda_sq_grid = detail::sturm_eigenvalues(T, count);
    sol.lambda_sq = sol.lambda_sq_grid;

    if (grid.richardson) {
        const int nh = (n - 1) / 2;
        auto Th = detail::build_matrix(ep, x_min, x_max, nh);
        const auto coarse = detail::sturm_eigenvalues(Th, count);
        for (int k = 0; k < count; ++k) {
            const double fine = sol.lambda_sq_grid[k];
            const double extr = fine + (fine - coarse[k]) / 3.0;
            sol.lambda_sq[k] = extr;
            const double err = std::fabs(fine - coarse[k]) / 3.0 /
                               std::max(std::fabs(extr), 1e-30);
            sol.error_rel = std::max(sol.error_rel, err);
        }
        if (sol.error_rel > grid.tol_rel) {
            sol.accuracy_warning = true;
            if (grid.strict)
                throw numerical_error("eigenvalues_numeric: estimated discretization error " +
                                      std::to_string(sol.error_rel) + " above tolerance");
        }
    }

    // alpha grid including both Dirichlet endpoints
    sol.alpha_grid.resize(n + 2);
    sol.alpha_grid[0] = ep.alpha_min;
    for (int i = 1; i <= n; ++i) sol.alpha_grid[i] = std::atan(std::exp(x_min + i * h));
    sol.alpha_grid[n + 1] = std::atan(std::exp(x_max));

    if (grid.want_vectors) {
        for (int k = 0; k < count; ++k) {
            auto y = detail::inverse_iteration(T, sol.lambda_sq_grid[k] * (1.0 + 1e-13) + 1e-290);
            std::vector<double> u(n + 2, 0.0);
            for (int i = 0; i < n; ++i) {
                const double x = x_min + (i + 1) * h;
                const double t = std::exp(x);
                const double c2 = 1.0 / (1.0 + t * t);
                const double rho = (t * t * c2) * c2;
                u[i + 1] = std::sqrt(2.0) * y[i] / std::pow(rho, 0.25);
            }
            // unit trapezoid norm on the alpha grid
            double nrm = 0;
            for (int i = 0; i + 1 < n + 2; ++i)
                nrm += 0.5 * (u[i] * u[i] + u[i + 1] * u[i + 1]) *
                       (sol.alpha_grid[i + 1] - sol.alpha_grid[i]);
            nrm = std::sqrt(nrm);
            double mx = 0;
            for (double v : u) mx = std::max(mx, std::fabs(v));
            double orient = 1.0;
            for (double v : u)
                if (std::fabs(v) > 1e-3 * mx) {
                    orient = (v > 0) ? 1.0 : -1.0;
                    break;
                }
            for (double& v : u) v *= orient / nrm;
            sol.eigenfunctions.push_back(std::move(u));
        }
    }
    return sol;
}

} // namespace efimov4

#endif
