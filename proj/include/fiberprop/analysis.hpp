#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fiberprop/grid.hpp"

namespace fiberprop {

double peak_power(const ComplexEnvelope& a);    // W
double pulse_energy(const ComplexEnvelope& a);  // W ps
/// Intensity-weighted mean time in ps. Throws InvalidArgument on a zero field.
double centroid(const ComplexEnvelope& a);

/// max_j |I_c(T_j) - I_r(T_j)| over the candidate samples. The reference grid
/// must cover the same window with a power-of-two multiple of the points;
/// candidate sample i then sits at reference index i * ratio.
double error_maxnorm(std::span<const double> candidate, const SimGrid& candidate_grid,
                     std::span<const double> reference, const SimGrid& reference_grid);

struct LadderRung {
    int n_half = 0;
    double h = 0.0;  // m
    int m_steps = 0;
    double error = 0.0;  // W
};

struct ConvergenceLadder {
    std::vector<LadderRung> rungs;
    int reference_n_half = 0;
    double reference_h = 0.0;
    int reference_m_steps = 0;
};

/// Least-squares slope of log E against log h. Needs >= 3 rungs with E > 0.
double convergence_order(std::span<const LadderRung> rungs);
double convergence_order(const ConvergenceLadder& ladder);

/// Spectrum sorted by increasing frequency offset. Per-bin power is
/// dt |S_k|^2 / (2N) with S = F(A), so sum(power) equals pulse_energy.
/// The offset nu = omega / 2pi adds to the carrier frequency.
struct PowerSpectrum {
    std::vector<double> freq_offset_thz;
    std::vector<double> wavelength_nm;  // empty unless a carrier wavelength was given
    std::vector<double> power;          // W ps per bin
    std::vector<double> power_norm;     // power / max(power); all zero for a zero field
};

PowerSpectrum power_spectrum(const ComplexEnvelope& a, double lambda0_m = 0.0);

// Characteristic lengths in m.
double dispersion_length(double t0_ps, double beta2_ps2_per_m);
double third_order_length(double t0_ps, double beta3_ps3_per_m);
double nonlinear_length(double gamma_per_w_m, double p0_w);

/// Mean spacing of the local maxima of `values` that exceed
/// `threshold * max(values)`. Empty when fewer than two maxima qualify.
std::optional<double> oscillation_period(std::span<const double> z,
                                         std::span<const double> values,
                                         double threshold = 0.5);

}  // namespace fiberprop
