#pragma once

#include <span>

#include "fiberprop/grid.hpp"

namespace fiberprop {

enum class Scheme { FirstOrderUpwind, MusclVanAlbada };

/// Coefficients of dA/dz = i g (A|A|^2 + i S d/dT(A|A|^2) - T_R A d|A|^2/dT).
struct NonlinearStepParams {
    double gamma = 0.0;    // 1/(W m)
    double s_steep = 0.0;  // ps
    double t_raman = 0.0;  // ps
    Scheme scheme = Scheme::MusclVanAlbada;

    void validate() const;
};

/// Difference phi_b - phi_a taken modulo 2 pi: the candidate of smallest
/// magnitude among {d, d + 2pi, d - 2pi}, ties resolved in that order.
/// Differences beyond 3 pi are first reduced to [-pi, pi].
double phase_delta(double phi_a, double phi_b);

/// Phi(r) = max(0, (r^2 + r) / (1 + r^2)); Phi(+-inf) = 1.
double limiter_van_albada(double r);

/// Smallest k >= 1 with 3 |g| S i_max (h / k) / dt <= 1.
int cfl_substep_count(const NonlinearStepParams& params, double i_max, double h, double dt);

/// One first-order upwind step: homogeneous update followed by the Kerr
/// source phi += dz g I_new. Throws CflViolation if dz breaks the bound.
PolarState upwind_first_order_step(const PolarState& state, const NonlinearStepParams& params,
                                   double dz, double dt);

/// One high-resolution step: half source, predictor/corrector, half source.
PolarState muscl_step(const PolarState& state, const NonlinearStepParams& params, double dz,
                      double dt);

/// Scheme step selected by params.scheme.
PolarState nonlinear_scheme_step(const PolarState& state, const NonlinearStepParams& params,
                                 double dz, double dt);

/// A -> polar, k CFL-limited scheme steps of h/k, polar -> A.
ComplexEnvelope nonlinear_operator_apply(const ComplexEnvelope& a,
                                         const NonlinearStepParams& params, double h);

/// Same as above on a raw buffer; returns the substep count k used.
/// scratch is resized as needed and may be reused across calls.
int nonlinear_operator_apply_in_place(std::span<Complex> a, const NonlinearStepParams& params,
                                      double h, double dt, PolarState& scratch);

}  // namespace fiberprop
