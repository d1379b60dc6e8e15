#ifndef EFIMOV4_GAMMA_HPP
#define EFIMOV4_GAMMA_HPP

#include <cmath>
#include <complex>
#include <numbers>

namespace efimov4 {

/// log Gamma for complex argument, Lanczos approximation (g = 7, 9 terms),
/// reflection formula for Re z < 0.5.  Relative accuracy ~1e-13 away from
/// the poles; at a pole the real part diverges to +inf, which exponentiates
/// to the correct limit (1/Gamma -> 0) in downstream coefficient ratios.
inline std::complex<double> log_gamma(std::complex<double> z) {
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi/sin(pi z)) - log Gamma(1 - z)
        return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace efimov4

#endif
