#include "fiberprop/detail/advection_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "fiberprop/error.hpp"

namespace fiberprop::detail {
namespace {

inline std::size_t next_index(std::size_t j, std::size_t n) { return j + 1 == n ? 0 : j + 1; }
inline std::size_t prev_index(std::size_t j, std::size_t n) { return j == 0 ? n - 1 : j - 1; }

// Row 1 of the advection matrix applied to a jump.
inline double intensity_flux(double gs, double b, double i_avg, double l_avg, double d_i,
                             double d_l) {
    return gs * ((3.0 * i_avg + b * l_avg) * d_i + 2.0 * b * i_avg * d_l);
}

// Row 2 of the advection matrix applied to a jump.
inline double phase_flux(const FieldCoefficients& c, double i_avg, double l_avg, double d_i,
                         double d_l, double d_phi) {
    return c.gamma * (c.t_raman * (d_i + c.b_xpm * d_l) +
                      c.s_steep * (i_avg + c.b_xpm * l_avg) * d_phi);
}

void check_sizes(std::span<const double> intensity, std::span<const double> phase,
                 std::span<const double> partner, std::span<double> intensity_out,
                 std::span<double> phase_out) {
    const std::size_t n = intensity.size();
    if (phase.size() != n || intensity_out.size() != n || phase_out.size() != n ||
        (!partner.empty() && partner.size() != n)) {
        throw GridMismatch("advection buffers differ in length");
    }
    if (n < 2) {
        throw InvalidArgument("advection needs at least two samples");
    }
}

struct MusclScratch {
    std::vector<double> i_bar, phi_bar, slope_i, slope_phi, d_phi;

    void resize(std::size_t n) {
        i_bar.resize(n);
        phi_bar.resize(n);
        slope_i.resize(n);
        slope_phi.resize(n);
        d_phi.resize(n);
    }
};

}  // namespace

double max_characteristic_load(std::span<const double> intensity,
                               std::span<const double> partner, double b_xpm) {
    double m = 0.0;
    for (std::size_t j = 0; j < intensity.size(); ++j) {
        const double l = partner.empty() ? 0.0 : partner[j];
        m = std::max(m, 3.0 * intensity[j] + b_xpm * l);
    }
    return m;
}

double cfl_number(const FieldCoefficients& c, double load_max, double dz, double dt) {
    return std::abs(c.gamma) * c.s_steep * load_max * dz / dt;
}

int substep_count(const FieldCoefficients& c, double load_max, double h, double dt) {
    const double ratio = cfl_number(c, load_max, h, dt);
    if (!std::isfinite(ratio)) {
        throw InvalidArgument(fmt::format("non-finite CFL number {}", ratio));
    }
    if (ratio <= 1.0) return 1;
    if (ratio > 1e9) {
        throw InvalidArgument(fmt::format("CFL number {} needs an absurd number of substeps", ratio));
    }
    int k = std::max(1, static_cast<int>(std::ceil(ratio)));
    while (cfl_number(c, load_max, h / k, dt) > 1.0) ++k;
    while (k > 1 && cfl_number(c, load_max, h / (k - 1), dt) <= 1.0) --k;
    return k;
}

double limited_slope(double d_minus, double d_plus) {
    const double denom = d_minus * d_minus + d_plus * d_plus;
    if (denom == 0.0) return 0.0;
    const double sum = d_minus + d_plus;
    return (std::max(0.0, d_minus * sum) * d_plus + std::max(0.0, d_plus * sum) * d_minus) /
           denom;
}

void advect_first_order(std::span<const double> intensity, std::span<const double> phase,
                        std::span<const double> partner, const FieldCoefficients& c,
                        double ratio, std::span<double> intensity_out,
                        std::span<double> phase_out) {
    check_sizes(intensity, phase, partner, intensity_out, phase_out);
    const std::size_t n = intensity.size();
    if (c.gamma == 0.0) {
        std::copy(intensity.begin(), intensity.end(), intensity_out.begin());
        std::copy(phase.begin(), phase.end(), phase_out.begin());
        return;
    }
    const bool from_right = c.gamma < 0.0;
    const bool coupled = !partner.empty();
    const double gs = c.gamma * c.s_steep;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t u = from_right ? next_index(j, n) : prev_index(j, n);
        const double ij = intensity[j];
        const double iu = intensity[u];
        const double lj = coupled ? partner[j] : 0.0;
        const double lu = coupled ? partner[u] : 0.0;
        const double i_avg = 0.5 * (ij + iu);
        const double l_avg = 0.5 * (lj + lu);
        const double d_i = from_right ? iu - ij : ij - iu;
        const double d_l = from_right ? lu - lj : lj - lu;
        const double d_phi =
            from_right ? phase_delta(phase[j], phase[u]) : phase_delta(phase[u], phase[j]);
        intensity_out[j] = ij - ratio * intensity_flux(gs, c.b_xpm, i_avg, l_avg, d_i, d_l);
        phase_out[j] = phase[j] - ratio * phase_flux(c, i_avg, l_avg, d_i, d_l, d_phi);
    }
}

void advect_muscl(std::span<const double> intensity, std::span<const double> phase,
                  std::span<const double> partner, const FieldCoefficients& c, double ratio,
                  std::span<double> intensity_out, std::span<double> phase_out) {
    check_sizes(intensity, phase, partner, intensity_out, phase_out);
    const std::size_t n = intensity.size();
    if (c.gamma == 0.0) {
        std::copy(intensity.begin(), intensity.end(), intensity_out.begin());
        std::copy(phase.begin(), phase.end(), phase_out.begin());
        return;
    }
    thread_local MusclScratch s;
    s.resize(n);

    // Predictor: first-order update over half the step.
    advect_first_order(intensity, phase, partner, c, 0.5 * ratio, s.i_bar, s.phi_bar);

    // d_phi[j] is the modulo-2pi jump across interface j+1/2.
    for (std::size_t j = 0; j < n; ++j) {
        s.d_phi[j] = phase_delta(s.phi_bar[j], s.phi_bar[next_index(j, n)]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jm = prev_index(j, n);
        const std::size_t jp = next_index(j, n);
        s.slope_i[j] = limited_slope(s.i_bar[j] - s.i_bar[jm], s.i_bar[jp] - s.i_bar[j]);
        s.slope_phi[j] = limited_slope(s.d_phi[jm], s.d_phi[j]);
    }

    const bool from_right = c.gamma < 0.0;
    const bool coupled = !partner.empty();
    const double gs = c.gamma * c.s_steep;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t u = from_right ? next_index(j, n) : prev_index(j, n);
        const double lj = coupled ? partner[j] : 0.0;
        const double lu = coupled ? partner[u] : 0.0;

        // Interface jump between the reconstructed states facing each other;
        // the matrix is evaluated at their mean.
        double d_i, d_phi, i_avg;
        if (from_right) {
            const double left = s.i_bar[j] + 0.25 * s.slope_i[j];   // q^r_j
            const double right = s.i_bar[u] - 0.25 * s.slope_i[u];  // q^l_{j+1}
            d_i = right - left;
            i_avg = 0.5 * (right + left);
            d_phi = s.d_phi[j] - 0.25 * (s.slope_phi[u] + s.slope_phi[j]);
        } else {
            const double left = s.i_bar[u] + 0.25 * s.slope_i[u];   // q^r_{j-1}
            const double right = s.i_bar[j] - 0.25 * s.slope_i[j];  // q^l_j
            d_i = right - left;
            i_avg = 0.5 * (left + right);
            d_phi = s.d_phi[u] - 0.25 * (s.slope_phi[j] + s.slope_phi[u]);
        }
        const double l_avg = 0.5 * (lj + lu);
        const double d_l = from_right ? lu - lj : lj - lu;

        // Cell jump q^r_j - q^l_j at the predictor state; the partner is not
        // reconstructed, so its jump vanishes.
        const double cell_i = s.i_bar[j];
        const double cell_d_i = 0.5 * s.slope_i[j];
        const double cell_d_phi = 0.5 * s.slope_phi[j];

        const double flux_i = intensity_flux(gs, c.b_xpm, i_avg, l_avg, d_i, d_l) +
                              intensity_flux(gs, c.b_xpm, cell_i, lj, cell_d_i, 0.0);
        const double flux_phi = phase_flux(c, i_avg, l_avg, d_i, d_l, d_phi) +
                                phase_flux(c, cell_i, lj, cell_d_i, 0.0, cell_d_phi);
        intensity_out[j] = intensity[j] - ratio * flux_i;
        phase_out[j] = phase[j] - ratio * flux_phi;
    }
}

void add_source(std::span<double> phase, std::span<const double> intensity,
                std::span<const double> partner, const FieldCoefficients& c, double dz) {
    if (c.gamma == 0.0) return;
    const double g = dz * c.gamma;
    if (partner.empty()) {
        for (std::size_t j = 0; j < phase.size(); ++j) phase[j] += g * (intensity[j] + 0.0);
    } else {
        for (std::size_t j = 0; j < phase.size(); ++j) {
            phase[j] += g * (intensity[j] + c.c_xpm * partner[j]);
        }
    }
}

double clamp_negative_intensity(std::span<double> intensity) {
    double worst = 0.0;
    for (double& v : intensity) {
        if (v < 0.0) {
            worst = std::min(worst, v);
            v = 0.0;
        }
    }
    return worst;
}

void scheme_step(PolarState& state, std::span<const double> partner,
                 const FieldCoefficients& c, double dz, double dt, Scheme scheme,
                 PolarState& work) {
    if (c.gamma == 0.0) return;
    const double load = max_characteristic_load(state.intensity, partner, c.b_xpm);
    const double cfl = cfl_number(c, load, dz, dt);
    if (cfl > 1.0) {
        throw CflViolation(fmt::format("CFL number {} exceeds 1 for dz = {} m", cfl, dz));
    }
    const std::size_t n = state.size();
    work.intensity.resize(n);
    work.phase.resize(n);
    const double ratio = dz / dt;
    if (scheme == Scheme::FirstOrderUpwind) {
        advect_first_order(state.intensity, state.phase, partner, c, ratio, work.intensity,
                           work.phase);
        clamp_negative_intensity(work.intensity);
        add_source(work.phase, work.intensity, partner, c, dz);
    } else {
        add_source(state.phase, state.intensity, partner, c, 0.5 * dz);
        advect_muscl(state.intensity, state.phase, partner, c, ratio, work.intensity,
                     work.phase);
        clamp_negative_intensity(work.intensity);
        add_source(work.phase, work.intensity, partner, c, 0.5 * dz);
    }
    std::swap(state, work);
}

namespace {

int guarded_step(PolarState& state, std::span<const double> partner, const FieldCoefficients& c,
                 double dz, double dt, Scheme scheme, PolarState& work, int depth) {
    const double load = max_characteristic_load(state.intensity, partner, c.b_xpm);
    if (cfl_number(c, load, dz, dt) <= 1.0 || depth >= 30) {
        scheme_step(state, partner, c, dz, dt, scheme, work);
        return 1;
    }
    const int a = guarded_step(state, partner, c, 0.5 * dz, dt, scheme, work, depth + 1);
    return a + guarded_step(state, partner, c, 0.5 * dz, dt, scheme, work, depth + 1);
}

}  // namespace

int advance(PolarState& state, std::span<const double> partner, const FieldCoefficients& c,
            double h, double dt, Scheme scheme, PolarState& work) {
    if (c.gamma == 0.0) return 1;
    const double load = max_characteristic_load(state.intensity, partner, c.b_xpm);
    const int k = substep_count(c, load, h, dt);
    const double dz = h / k;
    int taken = 0;
    for (int i = 0; i < k; ++i) taken += guarded_step(state, partner, c, dz, dt, scheme, work, 0);
    return taken;
}

}  // namespace fiberprop::detail
