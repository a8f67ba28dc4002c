#include "fiberprop/linear_op.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fiberprop/error.hpp"

namespace fiberprop {

LinearHalfStepPlan::LinearHalfStepPlan(const SimGrid& grid, const LinearCoefficients& coeffs,
                                       double h)
    : grid_(grid), coeffs_(coeffs), h_(h), multipliers_(grid.size()) {}

LinearHalfStepPlan LinearHalfStepPlan::build(const SimGrid& grid, const LinearCoefficients& c,
                                             double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument(fmt::format("step size must be positive, got {}", h));
    }
    LinearHalfStepPlan plan(grid, c, h);
    const double half = 0.5 * h;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.omega(signed_bin(k, grid.n_half()));
        const double w2 = w * w;
        const double phase = half * (0.5 * c.beta2 * w2 - c.beta3 * w2 * w / 6.0 - c.delta * w);
        const double gain = -0.25 * h * c.alpha;
        plan.multipliers_[k] = gain == 0.0 ? std::polar(1.0, phase)
                                           : std::polar(std::exp(gain), phase);
    }
    return plan;
}

void apply_linear_half_step_in_place(std::span<Complex> a, const LinearHalfStepPlan& plan,
                                     SpectralWorkspace& workspace) {
    if (a.size() != plan.grid().size() || workspace.size() != a.size()) {
        throw GridMismatch(fmt::format("linear plan built for {} samples, field has {}",
                                       plan.grid().size(), a.size()));
    }
    auto buf = workspace.buffer();
    std::copy(a.begin(), a.end(), buf.begin());
    workspace.to_spectrum();
    const auto m = plan.multipliers();
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= m[k];
    workspace.from_spectrum();
    std::copy(buf.begin(), buf.end(), a.begin());
}

ComplexEnvelope apply_linear_half_step(const ComplexEnvelope& a, const LinearHalfStepPlan& plan,
                                       SpectralWorkspace& workspace) {
    if (!(a.grid() == plan.grid())) {
        throw GridMismatch("field and linear plan live on different grids");
    }
    ComplexEnvelope out = a;
    apply_linear_half_step_in_place(out.samples(), plan, workspace);
    return out;
}

ComplexEnvelope apply_linear_half_step(const ComplexEnvelope& a, const LinearHalfStepPlan& plan) {
    SpectralWorkspace workspace(a.size());
    return apply_linear_half_step(a, plan, workspace);
}

}  // namespace fiberprop
