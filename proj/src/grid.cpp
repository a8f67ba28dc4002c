#include "fiberprop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fiberprop/error.hpp"

namespace fiberprop {

SimGrid::SimGrid(int n_half, double dt) : n_half_(n_half), dt_(dt) {
    if (n_half < 2) {
        throw InvalidArgument(fmt::format("grid needs n_half >= 2, got {}", n_half));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument(fmt::format("grid spacing must be positive, got {}", dt));
    }
}

double SimGrid::d_omega() const { return std::numbers::pi / (n_half_ * dt_); }

SimGrid make_grid(int n_half, double window_halfwidth) {
    if (!(window_halfwidth > 0.0) || !std::isfinite(window_halfwidth)) {
        throw InvalidArgument(
            fmt::format("window half-width must be positive, got {}", window_halfwidth));
    }
    if (n_half < 2) {
        throw InvalidArgument(fmt::format("grid needs n_half >= 2, got {}", n_half));
    }
    return SimGrid(n_half, window_halfwidth / n_half);
}

ComplexEnvelope::ComplexEnvelope(const SimGrid& grid)
    : grid_(grid), samples_(grid.size(), Complex{0.0, 0.0}) {}

ComplexEnvelope::ComplexEnvelope(const SimGrid& grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw GridMismatch(fmt::format("envelope has {} samples, grid has {}",
                                       samples_.size(), grid_.size()));
    }
}

std::vector<double> ComplexEnvelope::intensity() const {
    std::vector<double> out(samples_.size());
    std::transform(samples_.begin(), samples_.end(), out.begin(),
                   [](const Complex& a) { return std::norm(a); });
    return out;
}

bool ComplexEnvelope::is_zero() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](const Complex& a) { return a == Complex{0.0, 0.0}; });
}

bool ComplexEnvelope::all_finite() const {
    return std::all_of(samples_.begin(), samples_.end(), [](const Complex& a) {
        return std::isfinite(a.real()) && std::isfinite(a.imag());
    });
}

void FiberParams::validate() const {
    const double values[] = {alpha, beta2, beta3, gamma, s_steep, t_raman, lambda0};
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("fiber parameters must be finite");
        }
    }
    if (s_steep < 0.0) {
        throw InvalidArgument(fmt::format("self-steepening S must be >= 0, got {}", s_steep));
    }
    if (t_raman < 0.0) {
        throw InvalidArgument(fmt::format("Raman time T_R must be >= 0, got {}", t_raman));
    }
}

double self_steepening_from_wavelength(double lambda0_m) {
    if (!(lambda0_m > 0.0)) {
        throw InvalidArgument(fmt::format("carrier wavelength must be positive, got {}", lambda0_m));
    }
    return lambda0_m / (2.0 * std::numbers::pi * kSpeedOfLight) * 1e12;
}

void TwoModeParams::validate() const {
    mode[0].validate();
    mode[1].validate();
    if (!std::isfinite(delta)) {
        throw InvalidArgument("group-velocity mismatch must be finite");
    }
    for (int k = 0; k < 2; ++k) {
        if (!(b_xpm[k] >= 0.0) || !(c_xpm[k] >= 0.0)) {
            throw InvalidArgument("cross-phase factors B_k, C_k must be non-negative");
        }
    }
}

ComplexEnvelope gaussian_pulse(const SimGrid& grid, double p0, double t0, double chirp,
                               double t_center) {
    if (!(p0 >= 0.0)) {
        throw InvalidArgument(fmt::format("peak power must be >= 0, got {}", p0));
    }
    if (!(t0 > 0.0)) {
        throw InvalidArgument(fmt::format("pulse half-width must be positive, got {}", t0));
    }
    ComplexEnvelope a(grid);
    const double amplitude = std::sqrt(p0);
    const Complex factor{-0.5, -0.5 * chirp};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = (grid.time(i) - t_center) / t0;
        a[i] = amplitude * std::exp(factor * (x * x));
    }
    return a;
}

void madelung_forward(std::span<const Complex> a, PolarState& out) {
    out.intensity.resize(a.size());
    out.phase.resize(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out.intensity[j] = std::norm(a[j]);
        // arg(0) is undefined; zero keeps it deterministic.
        out.phase[j] = out.intensity[j] == 0.0 ? 0.0 : std::arg(a[j]);
    }
}

void madelung_inverse(const PolarState& p, std::span<Complex> out) {
    if (p.phase.size() != p.intensity.size() || out.size() != p.intensity.size()) {
        throw GridMismatch("polar state and output buffer differ in length");
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double i = p.intensity[j];
        if (i < 0.0 || std::isnan(i)) {
            throw InvalidArgument(fmt::format("negative intensity {} at sample {}", i, j));
        }
        out[j] = std::polar(std::sqrt(i), p.phase[j]);
    }
}

PolarState madelung_forward(const ComplexEnvelope& a) {
    PolarState p;
    madelung_forward(a.samples(), p);
    return p;
}

ComplexEnvelope madelung_inverse(const PolarState& p, const SimGrid& grid) {
    if (p.size() != grid.size()) {
        throw GridMismatch("polar state length does not match grid");
    }
    ComplexEnvelope a(grid);
    madelung_inverse(p, a.samples());
    return a;
}

}  // namespace fiberprop
