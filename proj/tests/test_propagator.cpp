#include <doctest.h>

#include "fiberprop/analysis.hpp"
#include "fiberprop/error.hpp"
#include "fiberprop/linear_op.hpp"
#include "fiberprop/propagator.hpp"
#include "test_support.hpp"

using namespace fiberprop;
using testing::max_abs_diff;

namespace {

FiberParams standard_fiber() {
    FiberParams f;
    f.beta2 = 0.5e-3;
    f.beta3 = 0.07e-3;
    f.gamma = 0.1;
    f.t_raman = 3e-3;
    f.lambda0 = 1550e-9;
    f.s_steep = self_steepening_from_wavelength(f.lambda0);
    return f;
}

FiberParams flipped(FiberParams f) {
    f.beta2 = -f.beta2;
    f.beta3 = -f.beta3;
    return f;
}

DispersionMap managed(double length) {
    return DispersionMap::tiled({{2000.0, standard_fiber()}, {2000.0, flipped(standard_fiber())}},
                                length);
}

SimConfig config(const SimGrid& g, double h, int m) {
    SimConfig c;
    c.grid = g;
    c.h = h;
    c.m_steps = m;
    return c;
}

// exp(L D) applied once: a plan for step 2L covers a full length L.
ComplexEnvelope linear_exact(const ComplexEnvelope& a, const FiberParams& f, double length,
                             double delta = 0.0) {
    const auto plan =
        LinearHalfStepPlan::build(a.grid(), {f.alpha, f.beta2, f.beta3, delta}, 2.0 * length);
    return apply_linear_half_step(a, plan);
}

}  // namespace

TEST_CASE("dispersion map averaging") {
    const auto map = managed(10000.0);
    const auto mid = average_params(map, 1990.0, 2010.0);
    CHECK(std::abs(mid.beta2) < 1e-18);
    CHECK(std::abs(mid.beta3) < 1e-18);
    CHECK(mid.gamma == doctest::Approx(0.1).epsilon(1e-15));

    const auto lopsided = average_params(map, 1995.0, 2010.0);
    CHECK(lopsided.beta2 == doctest::Approx(0.5e-3 * (5.0 - 10.0) / 15.0).epsilon(1e-12));

    const auto inside = average_params(map, 2100.0, 2140.0);
    CHECK(inside.beta2 == -0.5e-3);
    CHECK(inside.beta3 == -0.07e-3);

    const auto whole = average_params(map, 0.0, 8000.0);
    CHECK(std::abs(whole.beta2) < 1e-18);

    CHECK_THROWS_AS(average_params(map, -1.0, 10.0), InvalidArgument);
    CHECK_THROWS_AS(average_params(map, 9990.0, 10010.0), InvalidArgument);
}

TEST_CASE("dispersion map construction") {
    const auto c = DispersionMap::constant(standard_fiber(), 500.0);
    CHECK(c.length() == 500.0);
    CHECK(c.segments().size() == 1);
    CHECK(average_params(c, 100.0, 140.0).beta2 == 0.5e-3);

    const auto t = managed(5000.0);
    REQUIRE(t.segments().size() == 3);
    CHECK(t.segments()[2].z_start == 4000.0);
    CHECK(t.segments()[2].z_end == 5000.0);
    CHECK(t.at(0.0).beta2 > 0.0);
    CHECK(t.at(2000.0).beta2 < 0.0);
    CHECK(t.at(4500.0).beta2 > 0.0);
    CHECK(t.at(5000.0).beta2 > 0.0);

    FiberParams f = standard_fiber();
    CHECK_THROWS_AS(DispersionMap({{0.0, 10.0, f}, {20.0, 30.0, f}}), InvalidArgument);
    CHECK_THROWS_AS(DispersionMap({{5.0, 10.0, f}}), InvalidArgument);
    CHECK_THROWS_AS(DispersionMap({}), InvalidArgument);
}

TEST_CASE("zero steps return the input") {
    const SimGrid g = make_grid(256, 5.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto out = propagate(a, config(g, 10.0, 0), DispersionMap::constant(standard_fiber(), 100.0));
    CHECK(max_abs_diff(out.samples(), a.samples()) == 0.0);
}

TEST_CASE("propagate composes single steps") {
    const SimGrid g = make_grid(512, 5.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto map = managed(8000.0);
    const auto cfg = config(g, 40.0, 10);
    const auto whole = propagate(a, cfg, map);
    ComplexEnvelope b = a;
    for (int j = 0; j < 10; ++j) b = ssfm_step_single(b, map, j * 40.0, 40.0, cfg);
    CHECK(max_abs_diff(whole.samples(), b.samples()) <= 1e-11 * testing::max_abs(a.samples()));
}

TEST_CASE("linear propagation is exact and reversible") {
    const SimGrid g = make_grid(512, 5.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    FiberParams f = standard_fiber();
    f.gamma = 0.0;
    const auto cfg = config(g, 10.0, 20);
    const auto out = propagate(a, cfg, DispersionMap::constant(f, 200.0));
    const auto exact = linear_exact(a, f, 200.0);
    CHECK(max_abs_diff(out.samples(), exact.samples()) <= 1e-11 * testing::max_abs(a.samples()));

    const auto back = propagate(out, cfg, DispersionMap::constant(flipped(f), 200.0));
    CHECK(max_abs_diff(back.samples(), a.samples()) <= 1e-10 * testing::max_abs(a.samples()));
}

TEST_CASE("nonlinear propagation conserves energy") {
    const SimGrid g = make_grid(1024, 15.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto cfg = config(g, 10.0, 100);
    std::vector<StepDiagnostics> diag;
    const auto out = propagate(a, cfg, DispersionMap::constant(standard_fiber(), 1000.0), &diag);
    const double e0 = pulse_energy(a);
    CHECK(std::abs(pulse_energy(out) / e0 - 1.0) < 1e-10);
    REQUIRE(diag.size() == 101);
    CHECK(diag.front().z == 0.0);
    CHECK(diag.back().z == doctest::Approx(1000.0));
    for (const auto& d : diag) CHECK(std::abs(d.energy / e0 - 1.0) < 1e-10);
}

TEST_CASE("diagnostics cadence") {
    const SimGrid g = make_grid(128, 5.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    auto cfg = config(g, 10.0, 7);
    cfg.diagnostics_every = 3;
    std::vector<StepDiagnostics> diag;
    propagate(a, cfg, DispersionMap::constant(standard_fiber(), 70.0), &diag);
    REQUIRE(diag.size() == 4);  // z = 0, 30, 60, 70
    CHECK(diag[1].z == doctest::Approx(30.0));
    CHECK(diag[3].z == doctest::Approx(70.0));
}

TEST_CASE("run longer than the fiber is rejected") {
    const SimGrid g = make_grid(128, 5.0);
    const auto a = gaussian_pulse(g, 1.0, 0.5, 0.0);
    CHECK_THROWS_AS(propagate(a, config(g, 10.0, 11), DispersionMap::constant(standard_fiber(), 100.0)),
                    InvalidArgument);
    CHECK_THROWS_AS(propagate(a, config(make_grid(64, 5.0), 10.0, 1),
                              DispersionMap::constant(standard_fiber(), 100.0)),
                    GridMismatch);
}

TEST_CASE("two-mode linear propagation shifts field 2 by delta") {
    const SimGrid g = make_grid(512, 10.0);
    FiberParams f = standard_fiber();
    f.gamma = 0.0;
    TwoModeFiber fiber{{DispersionMap::constant(f, 400.0), DispersionMap::constant(f, 400.0)},
                       1e-3, {2.0, 2.0}, {2.0, 2.0}};
    const std::array<ComplexEnvelope, 2> in{gaussian_pulse(g, 1.0, 0.3, 0.0),
                                            gaussian_pulse(g, 0.5, 0.3, 0.0)};
    auto cfg = config(g, 20.0, 20);
    cfg.mode = PropagationMode::TwoMode;
    const auto out = propagate(in, cfg, fiber);
    const auto e1 = linear_exact(in[0], f, 400.0);
    const auto e2 = linear_exact(in[1], f, 400.0, 1e-3);
    CHECK(max_abs_diff(out[0].samples(), e1.samples()) < 1e-11);
    CHECK(max_abs_diff(out[1].samples(), e2.samples()) < 1e-11);
    // delta > 0 moves field 2 earlier by delta * L.
    CHECK(centroid(out[1]) - centroid(out[0]) == doctest::Approx(-0.4).epsilon(1e-9));
}

TEST_CASE("two-mode run with an empty field equals the single-mode run") {
    const SimGrid g = make_grid(512, 5.0);
    const auto map = managed(4000.0);
    TwoModeFiber fiber{{map, map}, 1.5e-5, {2.0, 2.0}, {2.0, 2.0}};
    auto cfg = config(g, 40.0, 50);
    cfg.mode = PropagationMode::TwoMode;
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto two = propagate({a, ComplexEnvelope(g)}, cfg, fiber);
    cfg.mode = PropagationMode::SingleMode;
    const auto one = propagate(a, cfg, map);
    CHECK(max_abs_diff(two[0].samples(), one.samples()) == 0.0);
    CHECK(two[1].is_zero());
}

// The cross-steepening term 2 B I dL/dT is not a flux derivative, so per-field
// energy is only an invariant with B = 0; C enters the phase alone.
TEST_CASE("coupled propagation without cross-steepening conserves each energy") {
    const SimGrid g = make_grid(1024, 4.0);
    FiberParams f1 = standard_fiber();
    f1.beta2 = 4e-8;
    f1.beta3 = 0.0;
    f1.gamma = 1.0;
    f1.t_raman = 0.0;
    FiberParams f2 = f1;
    f2.gamma = 1.2;
    f2.lambda0 = 1300e-9;
    f2.s_steep = self_steepening_from_wavelength(f2.lambda0);
    TwoModeFiber fiber{{DispersionMap::constant(f1, 2000.0), DispersionMap::constant(f2, 2000.0)},
                       1.5625e-5, {0.0, 0.0}, {2.0, 2.0}};
    auto cfg = config(g, 20.0, 100);
    cfg.mode = PropagationMode::TwoMode;
    const std::array<ComplexEnvelope, 2> in{gaussian_pulse(g, 0.625e-3, 0.08, 0.0),
                                            gaussian_pulse(g, 0.3125e-3, 0.08, 0.0)};
    const auto out = propagate(in, cfg, fiber);
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(pulse_energy(out[k]) / pulse_energy(in[k]) - 1.0) < 1e-10);
        CHECK(out[k].all_finite());
    }
}

TEST_CASE("ssfm step reduces to its sub-operators") {
    const SimGrid g = make_grid(256, 5.0);
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto cfg = config(g, 10.0, 1);

    FiberParams linear = standard_fiber();
    linear.gamma = 0.0;
    const auto l = ssfm_step_single(a, DispersionMap::constant(linear, 10.0), 0.0, 10.0, cfg);
    CHECK(max_abs_diff(l.samples(), linear_exact(a, linear, 10.0).samples()) < 1e-12 * testing::max_abs(a.samples()));

    FiberParams nonlinear = standard_fiber();
    nonlinear.beta2 = nonlinear.beta3 = 0.0;
    const auto n = ssfm_step_single(a, DispersionMap::constant(nonlinear, 10.0), 0.0, 10.0, cfg);
    const auto direct = nonlinear_operator_apply(
        a, {nonlinear.gamma, nonlinear.s_steep, nonlinear.t_raman, cfg.scheme}, 10.0);
    CHECK(max_abs_diff(n.samples(), direct.samples()) < 1e-14 * testing::max_abs(a.samples()));
}

TEST_CASE("two-mode step with field 2 absent equals the single-mode step") {
    const SimGrid g = make_grid(256, 5.0);
    const auto map = managed(4000.0);
    TwoModeFiber fiber{{map, map}, 1e-4, {2.0, 2.0}, {2.0, 2.0}};
    auto cfg = config(g, 40.0, 1);
    cfg.mode = PropagationMode::TwoMode;
    const auto a = gaussian_pulse(g, 0.625e-3, 0.08, 0.0);
    const auto two = ssfm_step_two_mode({a, ComplexEnvelope(g)}, fiber, 1980.0, 40.0, cfg);
    const auto one = ssfm_step_single(a, map, 1980.0, 40.0, cfg);
    CHECK(max_abs_diff(two[0].samples(), one.samples()) == 0.0);
}
