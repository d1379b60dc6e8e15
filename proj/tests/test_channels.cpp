#include <doctest.h>

#include <cmath>
#include <numbers>

#include "efimov4/channels.hpp"

using namespace efimov4;

namespace {
const UniversalConstants& consts() {
    static const auto uc = UniversalConstants::compute(2);
    return uc;
}
const ParticleSystem& unit_sys() {
    static const auto s = build_system(1.0, 1.0);
    return s;
}
} // namespace

TEST_CASE("curve_U: algebraic zero at lambda^2 = 1/4") {
    CHECK(curve_U(0.25, 123.0, unit_sys()) == 0.0);
    CHECK(curve_U(1.25, 10.0, unit_sys()) > 0);
    CHECK(curve_U(-3.0, 10.0, unit_sys()) < 0);
}

TEST_CASE("potential_U: continuum scaled value approaches (s1+3/2)^2 - 1/4") {
    const auto& uc = consts();
    ModelParams p;
    const double R4 = 2e4;
    const double U = potential_U(ChannelId::continuum(1, 0), R4, unit_sys(), p, uc);
    const double scaled = 2 * unit_sys().mu4 * R4 * R4 * U;
    const double L = uc.s_of(1) + 1.5;
    CHECK(scaled == doctest::Approx(L * L - 0.25).epsilon(1e-5)); // ~35.33
}

TEST_CASE("assemble_point: Q and W contracts") {
    const auto& uc = consts();
    ModelParams p;
    GridSpec g;
    g.points = 4001;
    const auto v = assemble_point(ChannelId::trimer(1), 3, 100.0, unit_sys(), p, uc, g, 1e-3, true);
    for (int k = 0; k < 3; ++k) {
        CHECK(v.Q[k] >= 0.0);                                  // integral of a square
        CHECK(v.W[k] <= v.U[k]);                               // W = U - Q/(2 mu4)
        CHECK(v.W[k] == doctest::Approx(v.U[k] - v.Q[k] / (2 * unit_sys().mu4)).epsilon(1e-13));
        CHECK(std::fabs(v.norm_der[k]) < 1e-6);                // <u|du/dR4> ~ 0
        CHECK(v.overlap[k] > 0.99);
    }
}

TEST_CASE("potential_Q: central difference is second order in h_rel") {
    const auto& uc = consts();
    ModelParams p;
    GridSpec g;
    g.points = 4001;
    const auto ch = ChannelId::trimer(1);
    const double q1 = potential_Q(ch, 100.0, unit_sys(), p, uc, g, 2e-3);
    const double q2 = potential_Q(ch, 100.0, unit_sys(), p, uc, g, 1e-3);
    const double q3 = potential_Q(ch, 100.0, unit_sys(), p, uc, g, 5e-4);
    const double ratio = (q1 - q2) / (q2 - q3);
    CHECK(ratio > 3.2);
    CHECK(ratio < 5.0);
}

TEST_CASE("continuum scaled W flattens at large R4") {
    const auto& uc = consts();
    ModelParams p;
    GridSpec g;
    g.points = 4001;
    const auto ch = ChannelId::continuum(1, 0);
    auto scaledW = [&](double R4) {
        const auto v = assemble_point(ch, 1, R4, unit_sys(), p, uc, g);
        return 2 * unit_sys().mu4 * R4 * R4 * v.W[0];
    };
    const double w1 = scaledW(2e3);
    const double w2 = scaledW(2e4);
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-4));
}

TEST_CASE("asymptotic_W_bound: frozen value, root location, linear n-shift") {
    const auto& uc = consts();
    const auto& sys = unit_sys();
    ModelParams p;
    // reference from direct 50-digit formula evaluation (n=3, R4=300)
    CHECK(asymptotic_W_bound(3, 300.0, sys, p, uc) ==
          doctest::Approx(5.11039686971514387e-7).epsilon(1e-7));
    // the bracket vanishes where ln(mu4 R4^2/(mu3 R0^2)) = (2(n+gamma)-s0)/s0 + pi/(2 s0)
    const double lnX = (2 * (3 + uc.gamma) - uc.s0) / uc.s0 + std::numbers::pi / (2 * uc.s0);
    const double R4zero = p.R0 * std::sqrt(sys.mu3 / sys.mu4) * std::exp(lnX / 2);
    CHECK(R4zero == doctest::Approx(329.730229362209).epsilon(1e-9));
    const double scaled_at_zero = 2 * sys.mu4 * R4zero * R4zero *
                                  asymptotic_W_bound(3, R4zero, sys, p, uc);
    CHECK(std::fabs(scaled_at_zero) < 1e-10);
    // n -> n+1 adds 2/pi to the bracket
    const double R4 = 250.0;
    const double diff = (asymptotic_W_bound(4, R4, sys, p, uc) -
                         asymptotic_W_bound(3, R4, sys, p, uc)) *
                        2 * sys.mu4 * R4 * R4;
    CHECK(diff == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
    // range warning below 10 R0
    bool warn = false;
    asymptotic_W_bound(3, 50.0, sys, p, uc, &warn);
    CHECK(warn);
    asymptotic_W_bound(3, 500.0, sys, p, uc, &warn);
    CHECK(!warn);
}

TEST_CASE("crossing_analytic: geometry and scalings") {
    const auto& uc = consts();
    const auto& sys = unit_sys();
    ModelParams p;
    const auto init = ChannelId::continuum(1, 0);
    const auto c3 = crossing_analytic(3, init, sys, p, uc);
    const auto c4 = crossing_analytic(4, init, sys, p, uc);
    // frozen references (50-digit formula evaluation)
    CHECK(c3.lambda_c == doctest::Approx(5.94430314594624483).epsilon(1e-10));
    CHECK(c3.R4c == doctest::Approx(18.2436734629283967).epsilon(1e-9));
    CHECK(c3.W_c == doctest::Approx(0.0667728225160515796).epsilon(1e-9));
    CHECK(c4.R4c / c3.R4c == doctest::Approx(uc.length_ratio).epsilon(1e-12)); // 22.69...
    CHECK(c3.W_c == doctest::Approx(peak_energy(3, 1, 0, sys, p, uc)).epsilon(1e-14));
    // R4c linear in R0
    ModelParams p2;
    p2.R0 = 20.0;
    CHECK(crossing_analytic(3, init, sys, p2, uc).R4c == doctest::Approx(2 * c3.R4c).epsilon(1e-12));
    CHECK_THROWS_AS(crossing_analytic(3, ChannelId::trimer(1), sys, p, uc), validation_error);
}

TEST_CASE("crossing_numeric: existence for n=3, none for n=1, contract checks") {
    const auto& uc = consts();
    const auto& sys = unit_sys();
    ModelParams p;
    GridSpec g;
    g.points = 2001;
    const auto init = ChannelId::continuum(1, 0);

    // default bracket for n=1 lies entirely inside the hard core
    CHECK(!crossing_numeric(1, init, sys, p, uc, 0, 0, g));

    const auto c3 = crossing_numeric(3, init, sys, p, uc, 0, 0, g);
    REQUIRE(c3.has_value());
    CHECK(c3->R4c > core_wall(sys, p));
    CHECK(c3->W_c > 0);
    CHECK(c3->source == Crossing::Source::numeric_root);
    // both W values equal at the root
    const auto t = assemble_point(ChannelId::trimer(3), 3, c3->R4c, sys, p, uc, g);
    const auto cc = assemble_point(init, 1, c3->R4c, sys, p, uc, g);
    CHECK(std::fabs(t.W[2] - cc.W[0]) <= 1e-6 * std::fabs(cc.W[0]));
    // lambda_c is the continuum eigenvalue at the crossing
    CHECK(c3->lambda_c == doctest::Approx(std::sqrt(cc.lambda_sq[0])).epsilon(1e-10));

    // a bracket that excludes the crossing reports no crossing
    CHECK(!crossing_numeric(3, init, sys, p, uc, c3->R4c * 2.0, c3->R4c * 8.0, g));
}

TEST_CASE("scaled curves: trimer descent and continuum flattening") {
    const auto& uc = consts();
    ModelParams p;
    GridSpec g;
    g.points = 2001;
    const std::vector<double> R4s{400.0, 1500.0, 6000.0, 2.5e4};
    const auto curves = assemble_curves(unit_sys(), p, uc, 4, 1, 0, R4s, g);
    for (const auto& c : curves) {
        std::vector<double> scaled;
        for (std::size_t i = 0; i < R4s.size(); ++i)
            scaled.push_back(2 * unit_sys().mu4 * R4s[i] * R4s[i] * c.W[i]);
        if (c.channel.is_trimer()) {
            // descend logarithmically well outside the core
            for (std::size_t i = 1; i < scaled.size(); ++i) CHECK(scaled[i] < scaled[i - 1]);
        } else {
            CHECK(scaled.back() == doctest::Approx(scaled[scaled.size() - 2]).epsilon(1e-6));
        }
    }
}

TEST_CASE("assemble_curves: shape and trimer energies") {
    const auto& uc = consts();
    ModelParams p;
    GridSpec g;
    g.points = 2001;
    const std::vector<double> R4s{12.0, 40.0, 200.0, 2000.0, 3e4};
    const auto curves = assemble_curves(unit_sys(), p, uc, 2, 2, 1, R4s, g);
    // 2 trimer + 2 families x 2 sublevels
    REQUIRE(curves.size() == 2 + 2 * 2);
    for (const auto& c : curves) {
        CHECK(c.R4_grid.size() == R4s.size());
        CHECK(c.U.size() == R4s.size());
        CHECK(c.W.size() == R4s.size());
    }
    CHECK(curves[0].channel.is_trimer());
    CHECK(curves[0].sublevel == 1);
    REQUIRE(curves[0].trimer_energy.has_value());
    CHECK(*curves[0].trimer_energy < 0);
    CHECK(!curves[2].channel.is_trimer());
    CHECK(curves[2].channel.alpha == 1);
    CHECK(curves[2].sublevel == 0);
}
