#ifndef EFIMOV4_ROOTFIND_HPP
#define EFIMOV4_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "efimov4/errors.hpp"

namespace efimov4 {

/// Bisection on a bracketed sign change.  fa = f(a) must oppose fb = f(b).
template <class F>
double bisect(F&& f, double a, double b, double fa, double fb, int max_iter = 200,
              double xtol_rel = 1e-15) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw convergence_error("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break; // interval at machine width
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (std::fabs(b - a) <= xtol_rel * (std::fabs(a) + std::fabs(b)) * 0.5) break;
    }
    return 0.5 * (a + b);
}

struct Bracket {
    double lo, hi; // f changes sign across [lo, hi]
    double flo, fhi;
};

/// Scan f over the given grid and collect sign-change brackets, in grid order.
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, const std::vector<double>& grid, std::size_t max_hits) {
    std::vector<Bracket> out;
    if (grid.size() < 2) return out;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size() && out.size() < max_hits; ++i) {
        const double cur = f(grid[i]);
        if (prev == 0.0) {
            out.push_back({grid[i - 1], grid[i - 1], 0.0, 0.0});
        } else if ((prev > 0) != (cur > 0)) {
            out.push_back({grid[i - 1], grid[i], prev, cur});
        }
        prev = cur;
    }
    return out;
}

} // namespace efimov4

#endif
