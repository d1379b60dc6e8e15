#ifndef EFIMOV4_UNIVERSAL_HPP
#define EFIMOV4_UNIVERSAL_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "efimov4/errors.hpp"
#include "efimov4/rootfind.hpp"

namespace efimov4 {

namespace detail {

// cos(pi*s/2) with the period-4 reduction done exactly in s, so that
// integer multiples land on exact zeros/ones of the quadrant functions.
inline double cos_half_pi(double s) {
    double r = std::fmod(s, 4.0);
    if (r < 0) r += 4.0;
    const double pi = std::numbers::pi;
    if (r < 1.0) return std::cos(r * pi / 2.0);
    if (r < 2.0) return -std::sin((r - 1.0) * pi / 2.0);
    if (r < 3.0) return -std::cos((r - 2.0) * pi / 2.0);
    return std::sin((r - 3.0) * pi / 2.0);
}

// sin(pi*s/6), period-12 reduction exact in s.
inline double sin_sixth_pi(double s) {
    double r = std::fmod(s, 12.0);
    if (r < 0) r += 12.0;
    double sign = 1.0;
    if (r >= 6.0) {
        r -= 6.0;
        sign = -1.0;
    }
    if (r > 3.0) r = 6.0 - r; // sin symmetric about s = 3
    return sign * std::sin(r * std::numbers::pi / 6.0);
}

} // namespace detail

/// Transcendental residual whose positive roots are the continuum channel
/// constants s_alpha:  sqrt(3) s cos(pi s/2) - 8 sin(pi s/6).
/// s = 4 solves it exactly but is a spurious root (vanishing channel
/// function) and is excluded from solve_s_alpha results.
inline double residual_s(double s) {
    return std::sqrt(3.0) * s * detail::cos_half_pi(s) - 8.0 * detail::sin_sixth_pi(s);
}

/// Hyperbolic counterpart whose positive root is s0 (the substitution
/// s -> i s in residual_s, common factor i divided out).
inline double residual_s0(double s) {
    const double pi = std::numbers::pi;
    return std::sqrt(3.0) * s * std::cosh(pi * s / 2.0) - 8.0 * std::sinh(pi * s / 6.0);
}

/// Positive root of residual_s0 in (0.5, 1.5); the trivial root s = 0 is
/// excluded by the search window.
inline double solve_s0(double tol = 1e-12) {
    if (!(tol > 0)) throw validation_error("solve_s0: tol must be positive");
    const double lo = 0.5, hi = 1.5;
    const int steps = 100;
    double a = lo, fa = residual_s0(a);
    for (int i = 1; i <= steps; ++i) {
        const double b = lo + (hi - lo) * i / steps;
        const double fb = residual_s0(b);
        if (fa == 0.0) return a;
        if ((fa > 0) != (fb > 0)) return bisect(residual_s0, a, b, fa, fb, 200, tol);
        a = b;
        fa = fb;
    }
    throw convergence_error("solve_s0: no sign change of the residual in (0.5, 1.5)");
}

/// alpha-th positive root of residual_s in increasing order, skipping the
/// spurious root s = 4.  Uniform sign scan (step 0.01) plus bisection.
inline double solve_s_alpha(int alpha, double tol = 1e-12, double s_max = 40.0) {
    if (alpha < 1) throw validation_error("solve_s_alpha: alpha must be >= 1");
    if (!(tol > 0)) throw validation_error("solve_s_alpha: tol must be positive");
    const double step = 0.01;
    int found = 0;
    double a = step, fa = residual_s(a);
    for (double b = 2 * step; b <= s_max + step; b += step) {
        const double fb = residual_s(b);
        if (fa == 0.0 || (fa > 0) != (fb > 0)) {
            double root = (fa == 0.0) ? a : bisect(residual_s, a, b, fa, fb, 200, tol);
            if (std::fabs(root - 4.0) > 1e-6) { // exclusion list: {4}
                ++found;
                if (found == alpha) return root;
            }
        }
        a = b;
        fa = fb;
    }
    throw convergence_error("solve_s_alpha: failed to bracket root #" + std::to_string(alpha) +
                            " below s_max = " + std::to_string(s_max));
}

/// Universal three-body channel constants.  Pure numbers: independent of
/// masses, R0 and all scattering lengths.
struct UniversalConstants {
    double s0 = 0;
    double gamma = 0.30103;
    std::vector<double> s_alpha; // s_alpha[k] is the (k+1)-th constant
    double efimov_ratio = 0;     // exp(-2 pi/s0)
    double length_ratio = 0;     // exp(+pi/s0)

    double s_of(int alpha) const {
        if (alpha < 1 || alpha > static_cast<int>(s_alpha.size()))
            throw validation_error("continuum alpha = " + std::to_string(alpha) +
                                   " outside the solved range");
        return s_alpha[alpha - 1];
    }

    static UniversalConstants compute(int alpha_max = 4, double tol = 1e-12) {
        UniversalConstants u;
        u.s0 = solve_s0(tol);
        for (int a = 1; a <= alpha_max; ++a) u.s_alpha.push_back(solve_s_alpha(a, tol));
        u.efimov_ratio = std::exp(-2.0 * std::numbers::pi / u.s0);
        u.length_ratio = std::exp(std::numbers::pi / u.s0);
        return u;
    }
};

} // namespace efimov4

#endif
