#include <catch2/catch_amalgamated.hpp>

#include "noonsim/adiabaticity.hpp"
#include "noonsim/config.hpp"
#include "noonsim/pulse.hpp"

using namespace noonsim;

TEST_CASE("gaussian pulse values") {
    PulseShape p = fig2_gaussian();
    CHECK(p.value(30.0) == Catch::Approx(1000.0));
    CHECK(p.value(0.0) == Catch::Approx(1000.0 * std::exp(-9.0)).epsilon(1e-12));
    CHECK(p.value(0.0) == Catch::Approx(0.12341).epsilon(1e-3));
}

TEST_CASE("steep pulse values") {
    PulseShape p = fig3_steep();
    // window end, just before the pole
    double v = p.value(2.0);
    CHECK(v == Catch::Approx(-3.0 * (std::tanh(6.0) - 100.0)).epsilon(1e-12));
    CHECK(v == Catch::Approx(297.0).epsilon(1e-3));
    // the pulse dips slightly negative between the tanh edge and the pole rise
    CHECK(p.value(0.9) < 0.0);
    CHECK(p.value(0.9) > -0.1);
}

TEST_CASE("derivatives match finite differences") {
    for (PulseShape p : {fig2_gaussian(), fig3_steep()}) {
        double lo = p.window().lo(), hi = p.window().hi();
        for (double f : {0.1, 0.35, 0.6, 0.85}) {
            double t = lo + f * (hi - lo);
            double h = 1e-6;
            double fd = (p.value(t + h) - p.value(t - h)) / (2 * h);
            double an = p.derivative(t);
            CHECK(an == Catch::Approx(fd).epsilon(1e-6).margin(1e-8));
        }
    }
}

TEST_CASE("gaussian derivative examples") {
    PulseShape p = fig2_gaussian();
    CHECK(p.derivative(30.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(p.derivative(25.0) > 0.0);  // rising edge
    // |d omega / omega| = 2*0.01*|t-30| exactly
    for (double t : {5.0, 12.0, 28.0})
        CHECK(std::abs(p.derivative(t) / p.value(t)) ==
              Catch::Approx(0.02 * std::abs(t - 30.0)).epsilon(1e-12));
}

TEST_CASE("steep pulse rises monotonically on [1, 2]") {
    PulseShape p = fig3_steep();
    double prev = p.value(1.0);
    for (double t = 1.01; t <= 2.0 + 1e-12; t += 0.01) {
        double v = p.value(t);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(p.derivative(1.9) > 0.0);
}

TEST_CASE("window handling") {
    PulseShape p = fig3_steep();
    CHECK_THROWS_AS(p.value(2.5), PulseWindowError);
    CHECK_THROWS_AS(p.value(-1.0), PulseWindowError);
    // a window reaching past the pole is rejected outright
    CHECK_THROWS_AS(PulseShape(SteepPulse{}, TimeWindow{0.0, 2.02}), PulseWindowError);
    // widening within the pole is fine
    PulseShape ok(SteepPulse{}, TimeWindow{0.0, 2.005});
    CHECK(ok.value(2.005) > p.value(2.0));
}

TEST_CASE("tabulated pulse interpolates and differentiates") {
    TabulatedPulse t;
    t.times = {0.0, 1.0, 2.0};
    t.values = {0.0, 2.0, 2.0};
    PulseShape p{PulseShape::Variant(t)};
    CHECK(p.value(0.5) == Catch::Approx(1.0));
    CHECK(p.value(1.5) == Catch::Approx(2.0));
    CHECK(p.derivative(0.5) == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("pulse speed dilation preserves shape") {
    PulseShape p = fig2_gaussian();
    PulseShape slow = dilate_pulse(p, 4.0);
    CHECK(slow.window().hi() == Catch::Approx(120.0));
    CHECK(slow.value(120.0) == Catch::Approx(p.value(30.0)));
    CHECK(slow.value(40.0) == Catch::Approx(p.value(10.0)));
    // derivative shrinks by the dilation factor
    CHECK(slow.derivative(40.0) == Catch::Approx(p.derivative(10.0) / 4.0));
}

namespace {

Trajectory synthetic_trajectory(const PulseShape& p, double dt, double nph_value) {
    Trajectory traj;
    for (double t = p.window().lo(); t <= p.window().hi() + 1e-12; t += dt) {
        TrajectorySample s;
        s.t = t;
        s.omega = p.value(t);
        s.n_ph_raw = nph_value;
        s.n_ph_cond = nph_value;
        s.norm = 1.0;
        traj.samples.push_back(s);
    }
    return traj;
}

}  // namespace

TEST_CASE("adiabaticity margins: constant pulse is infinitely adiabatic") {
    TabulatedPulse flat;
    flat.times = {0.0, 10.0};
    flat.values = {5.0, 5.0};
    PulseShape p{PulseShape::Variant(flat)};
    auto traj = synthetic_trajectory(p, 0.5, 1.0);
    auto rep = adiabaticity_report(p, traj, 1.0, 1.0);
    CHECK(std::isinf(rep.min_margin_empty));
    CHECK(std::isinf(rep.min_margin_photon));
    CHECK(rep.skipped_zero_omega == 0);
}

TEST_CASE("gaussian margin minimum sits at the window start") {
    PulseShape p = fig2_gaussian();
    auto traj = synthetic_trajectory(p, 0.1, 0.0);
    auto rep = adiabaticity_report(p, traj, 1.0, 1.0);
    // |d omega/omega| = 0.02 |t-30| peaks at t=0 within [0, 30]
    CHECK(rep.argmin_empty == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.min_margin_empty == Catch::Approx(1.0 / 0.6).epsilon(1e-9));
}

TEST_CASE("photon margin dominates the empty-cavity margin") {
    PulseShape p = fig3_steep();
    auto traj = synthetic_trajectory(p, 0.01, 3.0);
    auto rep = adiabaticity_report(p, traj, 1.0, 1.0);
    CHECK(rep.min_margin_photon >= rep.min_margin_empty);
    CHECK(rep.min_margin_photon_transfer >= 3.0 * rep.min_margin_empty_transfer * (1 - 1e-12));
}
