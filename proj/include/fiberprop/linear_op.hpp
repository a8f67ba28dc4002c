#pragma once

#include <span>
#include <vector>

#include "fiberprop/grid.hpp"
#include "fiberprop/spectral.hpp"

namespace fiberprop {

struct LinearCoefficients {
    double alpha = 0.0;  // 1/m
    double beta2 = 0.0;  // ps^2/m
    double beta3 = 0.0;  // ps^3/m
    double delta = 0.0;  // ps/m

    bool operator==(const LinearCoefficients&) const = default;
};

/// Spectral factors exp[(h/2)(i b2 w^2/2 - i b3 w^3/6 - a/2 - i d w)] for one
/// dispersion/loss half step, stored in FFTW bin order.
class LinearHalfStepPlan {
public:
    static LinearHalfStepPlan build(const SimGrid& grid, const LinearCoefficients& coeffs,
                                    double h);

    const SimGrid& grid() const { return grid_; }
    const LinearCoefficients& coefficients() const { return coeffs_; }
    double h() const { return h_; }
    std::span<const Complex> multipliers() const { return multipliers_; }

private:
    LinearHalfStepPlan(const SimGrid& grid, const LinearCoefficients& coeffs, double h);

    SimGrid grid_;
    LinearCoefficients coeffs_;
    double h_;
    std::vector<Complex> multipliers_;
};

/// F^-1(multipliers * F(a)).
ComplexEnvelope apply_linear_half_step(const ComplexEnvelope& a, const LinearHalfStepPlan& plan,
                                       SpectralWorkspace& workspace);
ComplexEnvelope apply_linear_half_step(const ComplexEnvelope& a, const LinearHalfStepPlan& plan);

void apply_linear_half_step_in_place(std::span<Complex> a, const LinearHalfStepPlan& plan,
                                     SpectralWorkspace& workspace);

}  // namespace fiberprop
