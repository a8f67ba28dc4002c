#pragma once

// Core data types: the co-moving temporal grid, the sampled complex envelope,
// its polar (intensity/phase) form and the fiber coefficient sets.
//
// Canonical units everywhere inside the library:
//   time      ps
//   distance  m
//   power     W   (so |A|^2 is instantaneous power and A carries sqrt(W))

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fiberprop {

using Complex = std::complex<double>;

/// Uniform grid of 2N samples at T_j = j*dt, j = -N..N-1.
class SimGrid {
public:
    SimGrid(int n_half, double dt);

    int n_half() const { return n_half_; }
    std::size_t size() const { return 2 * static_cast<std::size_t>(n_half_); }
    double dt() const { return dt_; }
    double t_min() const { return -n_half_ * dt_; }
    double t_max() const { return (n_half_ - 1) * dt_; }

    /// Time of storage index i (0 <= i < 2N).
    double time(std::size_t i) const {
        return (static_cast<double>(i) - n_half_) * dt_;
    }

    /// Spectral spacing pi / (N dt).
    double d_omega() const;

    /// Angular frequency of signed spectral index j in [-N, N-1].
    double omega(int j) const { return j * d_omega(); }

    bool operator==(const SimGrid& other) const {
        return n_half_ == other.n_half_ && dt_ == other.dt_;
    }

private:
    int n_half_;
    double dt_;
};

/// Grid covering [-halfwidth, halfwidth - dt] with 2*n_half points.
SimGrid make_grid(int n_half, double window_halfwidth);

class ComplexEnvelope {
public:
    explicit ComplexEnvelope(const SimGrid& grid);
    ComplexEnvelope(const SimGrid& grid, std::vector<Complex> samples);

    const SimGrid& grid() const { return grid_; }
    std::size_t size() const { return samples_.size(); }

    std::span<Complex> samples() { return samples_; }
    std::span<const Complex> samples() const { return samples_; }

    Complex& operator[](std::size_t i) { return samples_[i]; }
    const Complex& operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double> intensity() const;
    bool is_zero() const;
    bool all_finite() const;

private:
    SimGrid grid_;
    std::vector<Complex> samples_;
};

/// Madelung form A = sqrt(I) exp(i phi). Phase is kept unwrapped.
struct PolarState {
    std::vector<double> intensity;
    std::vector<double> phase;

    PolarState() = default;
    explicit PolarState(std::size_t n) : intensity(n, 0.0), phase(n, 0.0) {}

    std::size_t size() const { return intensity.size(); }
};

struct FiberParams {
    double alpha = 0.0;    // 1/m
    double beta2 = 0.0;    // ps^2/m
    double beta3 = 0.0;    // ps^3/m
    double gamma = 0.0;    // 1/(W m)
    double s_steep = 0.0;  // ps
    double t_raman = 0.0;  // ps
    double lambda0 = 0.0;  // m, zero when S was given directly

    void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// S = lambda0 / (2 pi c), returned in ps.
double self_steepening_from_wavelength(double lambda0_m);

struct TwoModeParams {
    std::array<FiberParams, 2> mode;
    double delta = 0.0;  // ps/m, enters the linear operator of field 2 only
    std::array<double, 2> b_xpm{0.0, 0.0};
    std::array<double, 2> c_xpm{0.0, 0.0};

    void validate() const;
};

/// sqrt(p0) exp(-(1 + iC)/2 * (T - t_center)^2 / t0^2)
ComplexEnvelope gaussian_pulse(const SimGrid& grid, double p0, double t0,
                               double chirp, double t_center = 0.0);

PolarState madelung_forward(const ComplexEnvelope& a);
ComplexEnvelope madelung_inverse(const PolarState& p, const SimGrid& grid);

// In-place variants used on the propagation hot path.
void madelung_forward(std::span<const Complex> a, PolarState& out);
void madelung_inverse(const PolarState& p, std::span<Complex> out);

}  // namespace fiberprop
