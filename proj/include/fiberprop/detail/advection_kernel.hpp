#pragma once

// Homogeneous advection updates for the Madelung system of one field
//
//   dI/dz   + g S [(3 I + B L) dI/dT + 2 B I dL/dT]            = 0
//   dphi/dz + g [T_R (dI/dT + B dL/dT) + S (I + B L) dphi/dT]  = 0
//
// where L is the intensity of a partner field held frozen in z (empty span:
// single-mode case, L == 0). The source terms are applied separately through
// add_source(). Both characteristic speeds carry the sign of g, which alone
// selects the upwind side. Indices wrap periodically; only the upstream
// neighbour is ever read.
//
// Exposed for tests that need the homogeneous part without sources.

#include <span>

#include "fiberprop/grid.hpp"
#include "fiberprop/nonlinear_single.hpp"

namespace fiberprop::detail {

struct FieldCoefficients {
    double gamma = 0.0;
    double s_steep = 0.0;
    double t_raman = 0.0;
    double b_xpm = 0.0;
    double c_xpm = 0.0;
};

/// max_j (3 I_j + B L_j)
double max_characteristic_load(std::span<const double> intensity,
                               std::span<const double> partner, double b_xpm);

/// |g| S max_j(3 I + B L) dz / dT
double cfl_number(const FieldCoefficients& c, double load_max, double dz, double dt);

/// Smallest k >= 1 with cfl_number(dz = h / k) <= 1.
int substep_count(const FieldCoefficients& c, double load_max, double h, double dt);

/// First-order upwind update with ratio = dz / dT. Output spans must not alias input.
void advect_first_order(std::span<const double> intensity, std::span<const double> phase,
                        std::span<const double> partner, const FieldCoefficients& c,
                        double ratio, std::span<double> intensity_out,
                        std::span<double> phase_out);

/// Predictor/corrector high-resolution update (van Albada limited).
void advect_muscl(std::span<const double> intensity, std::span<const double> phase,
                  std::span<const double> partner, const FieldCoefficients& c, double ratio,
                  std::span<double> intensity_out, std::span<double> phase_out);

/// phase += dz * g * (I + C L), exact for frozen intensities.
void add_source(std::span<double> phase, std::span<const double> intensity,
                std::span<const double> partner, const FieldCoefficients& c, double dz);

/// sigma_j = Phi(dm/dp) dp + Phi(dp/dm) dm, evaluated without divisions by
/// either difference; zero when both vanish.
double limited_slope(double d_minus, double d_plus);

/// One CFL-checked scheme step of size dz on `state` (source terms included).
/// `work` is scratch of any size. Throws CflViolation when dz is too large.
void scheme_step(PolarState& state, std::span<const double> partner,
                 const FieldCoefficients& c, double dz, double dt, Scheme scheme,
                 PolarState& work);

/// Advances `state` over h in k equal substeps, k from the CFL bound at
/// entry. A substep that the grown intensity would push past the bound is
/// halved until it fits. Returns the number of scheme steps taken.
int advance(PolarState& state, std::span<const double> partner, const FieldCoefficients& c,
            double h, double dt, Scheme scheme, PolarState& work);

/// Zeroes negative intensities left by the limited reconstruction; returns
/// the most negative value seen (0 when none).
double clamp_negative_intensity(std::span<double> intensity);

}  // namespace fiberprop::detail
