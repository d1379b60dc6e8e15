#ifndef EFIMOV4_SYSTEM_HPP
#define EFIMOV4_SYSTEM_HPP

#include <cmath>
#include <optional>
#include <string>

#include "efimov4/errors.hpp"

namespace efimov4 {

/// Masses of the three identical bosons A and the distinguishable atom B,
/// with the reduced masses of the A3+B arrangement (atomic units throughout).
struct ParticleSystem {
    double m_A = 0;
    double m_B = 0;
    double mu_AB = 0; // two-body AB reduced mass
    double mu3 = 0;   // three-body A3 reduced mass, m_A/sqrt(3)
    double mu34 = 0;  // A3--B relative reduced mass
    double mu4 = 0;   // four-body hyperradial mass, sqrt(mu3*mu34)
};

inline ParticleSystem build_system(double m_A, double m_B) {
    if (!(m_A > 0)) throw validation_error("m_A must be positive, got " + std::to_string(m_A));
    if (!(m_B > 0)) throw validation_error("m_B must be positive, got " + std::to_string(m_B));
    ParticleSystem sys;
    sys.m_A = m_A;
    sys.m_B = m_B;
    sys.mu_AB = m_A * m_B / (m_A + m_B);
    sys.mu3 = m_A / std::sqrt(3.0);
    sys.mu34 = 3.0 * m_A * m_B / (3.0 * m_A + m_B);
    sys.mu4 = std::sqrt(sys.mu3 * sys.mu34);
    return sys;
}

/// Model parameters: hard-wall radius, scattering lengths, diabatic coupling
/// strength, short-range phase.  a_AA is either "infinite" (nullopt, the
/// primary operating mode) or finite negative (threshold mode only).
struct ModelParams {
    double R0 = 10.0;
    double a_AB = 100.0;
    std::optional<double> a_AA = std::nullopt; // nullopt = infinite
    double beta = 1e-3;
    double Phi = 0.0;
};

inline void validate(const ModelParams& p) {
    if (!(p.R0 > 0)) throw validation_error("R0 must be positive");
    if (!(p.beta > 0)) throw validation_error("beta must be positive");
    if (p.a_AA && !(*p.a_AA < 0))
        throw validation_error("finite a_AA must be negative (no weakly bound A-A dimers)");
}

/// Channel identity: an atom-trimer channel (trimer index n >= 1) or a
/// four-body continuum channel labelled by (alpha >= 1, m >= 0).
struct ChannelId {
    enum class Kind { atom_trimer, continuum };
    Kind kind = Kind::atom_trimer;
    int n = 0;     // trimer index, atom_trimer only
    int alpha = 0; // continuum family, continuum only
    int m = -1;    // continuum sublevel, continuum only

    static ChannelId trimer(int n) {
        if (n < 1) throw validation_error("trimer index n must be >= 1");
        ChannelId c;
        c.kind = Kind::atom_trimer;
        c.n = n;
        return c;
    }
    static ChannelId continuum(int alpha, int m) {
        if (alpha < 1) throw validation_error("continuum alpha must be >= 1");
        if (m < 0) throw validation_error("continuum m must be >= 0");
        ChannelId c;
        c.kind = Kind::continuum;
        c.alpha = alpha;
        c.m = m;
        return c;
    }
    bool is_trimer() const { return kind == Kind::atom_trimer; }
    /// eigenvalue index within the channel's hyperangular problem (1-based)
    int sublevel_index() const { return is_trimer() ? n : m + 1; }
};

/// Hyperradius below which the hyperangular domain is empty: the hard-core
/// image sqrt(mu3/mu4)*R0.
inline double core_wall(const ParticleSystem& sys, const ModelParams& p) {
    return std::sqrt(sys.mu3 / sys.mu4) * p.R0;
}

/// Lower hyperangular boundary arcsin(sqrt(mu3/mu4) R0/R4), in (0, pi/2).
inline double alpha_min(double R4, const ParticleSystem& sys, const ModelParams& p) {
    const double c = core_wall(sys, p) / R4;
    if (!(R4 > 0) || !(c < 1.0))
        throw domain_error("hyperradius inside regularization core: R4 = " + std::to_string(R4) +
                           " <= " + std::to_string(core_wall(sys, p)));
    return std::asin(c);
}

} // namespace efimov4

#endif
