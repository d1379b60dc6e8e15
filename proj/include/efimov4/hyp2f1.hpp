#ifndef EFIMOV4_HYP2F1_HPP
#define EFIMOV4_HYP2F1_HPP

/*  Gauss hypergeometric function 2F1(a,b;c;z) for complex parameters and
 *  real z in [0,1).
 *
 *  Direct power series for z <= 0.5; the z -> 1-z linear transformation
 *  otherwise.  The transformation requires c-a-b not an integer: for the
 *  parameter families used here c-a-b equals -i*s0 (atom-trimer channels)
 *  or +s_alpha (continuum channels), never an integer.  The integer case
 *  is guarded anyway and reported as unsupported.
 *
 *  The series is accumulated in complex<long double>: the trimer-channel
 *  parameter combinations with |Im| up to ~15 suffer intermediate-term
 *  growth of order 1e8-1e9 at z = 0.5, which extended precision absorbs
 *  while keeping ~1e-10 relative accuracy in the double result.
 */

#include <cmath>
#include <complex>

#include "efimov4/errors.hpp"
#include "efimov4/gamma.hpp"

namespace efimov4 {

namespace detail {

struct SeriesResult {
    std::complex<double> value;
    double loss; // max intermediate term magnitude over |sum|
};

inline SeriesResult hyp2f1_series(std::complex<double> a, std::complex<double> b,
                                  std::complex<double> c, double z) {
    using CLD = std::complex<long double>;
    const CLD al(a.real(), a.imag()), bl(b.real(), b.imag()), cl(c.real(), c.imag());
    const long double zl = z;
    CLD term(1.0L, 0.0L);
    CLD sum(1.0L, 0.0L);
    long double max_term = 1.0L;
    int small_count = 0;
    const int kmax = 20000;
    for (int k = 0; k < kmax; ++k) {
        const long double kl = k;
        term *= (al + kl) * (bl + kl) / ((cl + kl) * (kl + 1.0L)) * zl;
        sum += term;
        const long double at = std::abs(term);
        if (at > max_term) max_term = at;
        if (at <= 1e-20L * std::abs(sum)) {
            if (++small_count >= 2) break;
        } else {
            small_count = 0;
        }
        if (k == kmax - 1)
            throw numerical_error("hyp2f1: series did not converge within 20000 terms");
    }
    const long double as = std::abs(sum);
    SeriesResult r;
    r.value = std::complex<double>(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    r.loss = (as > 0) ? static_cast<double>(max_term / as) : 1e300;
    // the absolute error of the extended-precision sum is ~1e-19 * max_term;
    // beyond this growth nothing useful survives at any scale (the sum may
    // legitimately be near zero -- root finding evaluates there -- so the
    // guard must not compare against |sum|)
    if (max_term > 1e22L)
        throw numerical_error("hyp2f1: catastrophic term growth in the power series");
    return r;
}

inline bool near_integer(std::complex<double> v, double tol = 1e-9) {
    return std::fabs(v.imag()) < tol && std::fabs(v.real() - std::round(v.real())) < tol;
}

/// core evaluation; zc must equal 1-z (passed separately so callers that
/// know 1-z to full precision, e.g. sin^2 vs cos^2 of the same angle, do
/// not lose digits near z = 1)
inline std::complex<double> hyp2f1_zc(std::complex<double> a, std::complex<double> b,
                                      std::complex<double> c, double z, double zc) {
    if (!(z >= 0.0) || !(z < 1.0) || !(zc > 0.0))
        throw domain_error("hyp2f1: z must lie in [0,1)");
    if (near_integer(c) && c.real() <= 0.0)
        throw domain_error("hyp2f1: c is a non-positive integer");
    if (z == 0.0) return {1.0, 0.0};
    if (z <= 0.5) return hyp2f1_series(a, b, c, z).value;

    const std::complex<double> cab = c - a - b;
    if (near_integer(cab))
        throw unsupported_case_error("hyp2f1: integer c-a-b not supported by the z->1-z transformation");
    const std::complex<double> k1 =
        std::exp(log_gamma(c) + log_gamma(cab) - log_gamma(c - a) - log_gamma(c - b));
    const std::complex<double> k2 =
        std::exp(log_gamma(c) + log_gamma(-cab) - log_gamma(a) - log_gamma(b) +
                 cab * std::log(zc));
    const std::complex<double> f1 = hyp2f1_series(a, b, 1.0 - cab, zc).value;
    const std::complex<double> f2 = hyp2f1_series(c - a, c - b, 1.0 + cab, zc).value;
    return k1 * f1 + k2 * f2;
}

} // namespace detail

/// 2F1(a,b;c;z), complex parameters, z in [0,1), relative accuracy ~1e-10.
inline std::complex<double> gauss_2f1(std::complex<double> a, std::complex<double> b,
                                      std::complex<double> c, double z) {
    return detail::hyp2f1_zc(a, b, c, z, 1.0 - z);
}

} // namespace efimov4

#endif
