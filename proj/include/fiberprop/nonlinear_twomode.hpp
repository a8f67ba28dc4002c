#pragma once

// Coupled nonlinear sub-operator of the two-mode model.
//
// With u = (I1, phi1, I2, phi2) the Madelung system reads
//   du/dz + B(u) du/dT = r(u),
//   B(u) = | g1 S1 (3 I1 + B1 I2)   0                    2 g1 S1 B1 I1          0                   |
//          | g1 T_R                  g1 S1 (I1 + B1 I2)   g1 T_R B1              0                   |
//          | 2 g2 S2 B2 I2           0                    g2 S2 (3 I2 + B2 I1)   0                   |
//          | g2 T_R B2               0                    g2 T_R                 g2 S2 (I2 + B2 I1)  |
//   r(u) = (0, g1 (I1 + C1 I2), 0, g2 (I2 + C2 I1)).
// It is not solved unsplit: each field is advanced with the partner
// intensity frozen, and the three single-field updates are composed
// symmetrically (half step field 1, full step field 2, half step field 1).

#include <array>
#include <span>

#include "fiberprop/grid.hpp"
#include "fiberprop/nonlinear_single.hpp"

namespace fiberprop {

struct TwoModePolar {
    std::array<PolarState, 2> field;
};

/// Advance (I_k, phi_k) by dz with the partner intensity frozen. Throws
/// CflViolation if |g_k| S_k max(3 I_k + B_k I_l) dz / dt > 1.
PolarState single_field_step(const PolarState& own, std::span<const double> other_intensity,
                             const FiberParams& k_params, double b_k, double c_k, double dz,
                             double dt, Scheme scheme);

struct CoupledApplyStats {
    int max_substeps = 1;
};

/// Symmetric fractional coupling over h. Each of the three sub-applications
/// CFL-substeps on its own using the partner state frozen at its entry.
TwoModePolar coupled_nonlinear_apply(const TwoModePolar& state, const TwoModeParams& params,
                                     double h, double dt, Scheme scheme,
                                     CoupledApplyStats* stats = nullptr);

/// In-place variant on complex fields; returns the largest substep count.
int coupled_nonlinear_apply_in_place(std::span<Complex> a1, std::span<Complex> a2,
                                     const TwoModeParams& params, double h, double dt,
                                     Scheme scheme, TwoModePolar& scratch);

/// Characteristic speeds g S (3 I + B L) and g S (I + B L) at one sample.
std::array<double, 2> two_mode_characteristic_speeds(double gamma, double s_steep, double b,
                                                     double own, double other);

}  // namespace fiberprop
