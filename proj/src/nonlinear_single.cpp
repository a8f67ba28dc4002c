#include "fiberprop/nonlinear_single.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fiberprop/detail/advection_kernel.hpp"
#include "fiberprop/error.hpp"

namespace fiberprop {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

detail::FieldCoefficients coefficients_of(const NonlinearStepParams& p) {
    return {p.gamma, p.s_steep, p.t_raman, 0.0, 0.0};
}

PolarState step_copy(const PolarState& state, const NonlinearStepParams& params, double dz,
                     double dt, Scheme scheme) {
    params.validate();
    if (!(dz > 0.0) || !(dt > 0.0)) {
        throw InvalidArgument(fmt::format("step sizes must be positive (dz = {}, dt = {})", dz, dt));
    }
    if (state.phase.size() != state.intensity.size()) {
        throw GridMismatch("polar state intensity and phase differ in length");
    }
    PolarState out = state;
    PolarState work;
    detail::scheme_step(out, {}, coefficients_of(params), dz, dt, scheme, work);
    return out;
}

}  // namespace

void NonlinearStepParams::validate() const {
    if (!std::isfinite(gamma) || !std::isfinite(s_steep) || !std::isfinite(t_raman)) {
        throw InvalidArgument("nonlinear coefficients must be finite");
    }
    if (s_steep < 0.0 || t_raman < 0.0) {
        throw InvalidArgument("S and T_R must be non-negative");
    }
}

double phase_delta(double phi_a, double phi_b) {
    double d = phi_b - phi_a;
    if (std::abs(d) > 3.0 * std::numbers::pi) {
        d = std::remainder(d, kTwoPi);
    }
    const double up = d + kTwoPi;
    const double down = d - kTwoPi;
    const double best = std::min({std::abs(d), std::abs(up), std::abs(down)});
    if (std::abs(d) == best) return d;
    if (std::abs(up) == best) return up;
    return down;
}

double limiter_van_albada(double r) {
    if (std::isinf(r)) return 1.0;
    return std::max(0.0, (r * r + r) / (1.0 + r * r));
}

int cfl_substep_count(const NonlinearStepParams& params, double i_max, double h, double dt) {
    if (!(h > 0.0) || !(dt > 0.0) || !(i_max >= 0.0)) {
        throw InvalidArgument("CFL substepping needs h > 0, dt > 0, i_max >= 0");
    }
    return detail::substep_count(coefficients_of(params), 3.0 * i_max, h, dt);
}

PolarState upwind_first_order_step(const PolarState& state, const NonlinearStepParams& params,
                                   double dz, double dt) {
    return step_copy(state, params, dz, dt, Scheme::FirstOrderUpwind);
}

PolarState muscl_step(const PolarState& state, const NonlinearStepParams& params, double dz,
                      double dt) {
    return step_copy(state, params, dz, dt, Scheme::MusclVanAlbada);
}

PolarState nonlinear_scheme_step(const PolarState& state, const NonlinearStepParams& params,
                                 double dz, double dt) {
    return step_copy(state, params, dz, dt, params.scheme);
}

int nonlinear_operator_apply_in_place(std::span<Complex> a, const NonlinearStepParams& params,
                                      double h, double dt, PolarState& scratch) {
    params.validate();
    if (!(h > 0.0)) {
        throw InvalidArgument(fmt::format("nonlinear step must be positive, got {}", h));
    }
    if (params.gamma == 0.0) return 1;

    madelung_forward(a, scratch);
    const auto c = coefficients_of(params);
    thread_local PolarState work;
    const int k = detail::advance(scratch, {}, c, h, dt, params.scheme, work);
    madelung_inverse(scratch, a);
    return k;
}

ComplexEnvelope nonlinear_operator_apply(const ComplexEnvelope& a,
                                         const NonlinearStepParams& params, double h) {
    ComplexEnvelope out = a;
    PolarState scratch;
    nonlinear_operator_apply_in_place(out.samples(), params, h, a.grid().dt(), scratch);
    return out;
}

}  // namespace fiberprop
