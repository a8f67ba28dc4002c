#include "fiberprop/nonlinear_twomode.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "fiberprop/detail/advection_kernel.hpp"
#include "fiberprop/error.hpp"

namespace fiberprop {
namespace {

detail::FieldCoefficients coefficients_of(const FiberParams& p, double b, double c) {
    return {p.gamma, p.s_steep, p.t_raman, b, c};
}

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// A vanishing partner contributes nothing; dropping it routes the update
// through exactly the single-mode arithmetic.
std::span<const double> partner_view(const std::vector<double>& other) {
    if (all_zero(other)) return {};
    return other;
}

int sub_apply(PolarState& own, std::span<const double> partner,
              const detail::FieldCoefficients& c, double h, double dt, Scheme scheme,
              PolarState& work) {
    return detail::advance(own, partner, c, h, dt, scheme, work);
}

// Runs the symmetric fractional coupling on polar fields in place.
int coupled_polar(TwoModePolar& s, const TwoModeParams& p, double h, double dt, Scheme scheme) {
    const bool empty1 = all_zero(s.field[0].intensity);
    const bool empty2 = all_zero(s.field[1].intensity);
    const auto c1 = coefficients_of(p.mode[0], p.b_xpm[0], p.c_xpm[0]);
    const auto c2 = coefficients_of(p.mode[1], p.b_xpm[1], p.c_xpm[1]);
    thread_local PolarState work;

    if (empty1 && empty2) return 1;
    // With one field absent nothing couples, and the two half steps of field
    // 1 collapse into one full step.
    if (empty2) return sub_apply(s.field[0], {}, c1, h, dt, scheme, work);
    if (empty1) return sub_apply(s.field[1], {}, c2, h, dt, scheme, work);

    int k = sub_apply(s.field[0], partner_view(s.field[1].intensity), c1, 0.5 * h, dt, scheme,
                      work);
    k = std::max(k, sub_apply(s.field[1], partner_view(s.field[0].intensity), c2, h, dt,
                              scheme, work));
    k = std::max(k, sub_apply(s.field[0], partner_view(s.field[1].intensity), c1, 0.5 * h, dt,
                              scheme, work));
    return k;
}

void check_step(double h, double dt) {
    if (!(h > 0.0) || !(dt > 0.0)) {
        throw InvalidArgument(fmt::format("step sizes must be positive (h = {}, dt = {})", h, dt));
    }
}

}  // namespace

PolarState single_field_step(const PolarState& own, std::span<const double> other_intensity,
                             const FiberParams& k_params, double b_k, double c_k, double dz,
                             double dt, Scheme scheme) {
    k_params.validate();
    check_step(dz, dt);
    if (b_k < 0.0 || c_k < 0.0) {
        throw InvalidArgument("cross-phase factors must be non-negative");
    }
    if (other_intensity.size() != own.size() || own.phase.size() != own.size()) {
        throw GridMismatch("partner intensity length differs from the field");
    }
    PolarState out = own;
    PolarState work;
    const std::vector<double> other(other_intensity.begin(), other_intensity.end());
    detail::scheme_step(out, partner_view(other), coefficients_of(k_params, b_k, c_k), dz, dt,
                        scheme, work);
    return out;
}

TwoModePolar coupled_nonlinear_apply(const TwoModePolar& state, const TwoModeParams& params,
                                     double h, double dt, Scheme scheme,
                                     CoupledApplyStats* stats) {
    params.validate();
    check_step(h, dt);
    if (state.field[0].size() != state.field[1].size()) {
        throw GridMismatch("two-mode fields differ in length");
    }
    TwoModePolar out = state;
    const int k = coupled_polar(out, params, h, dt, scheme);
    if (stats != nullptr) stats->max_substeps = k;
    return out;
}

int coupled_nonlinear_apply_in_place(std::span<Complex> a1, std::span<Complex> a2,
                                     const TwoModeParams& params, double h, double dt,
                                     Scheme scheme, TwoModePolar& scratch) {
    check_step(h, dt);
    if (a1.size() != a2.size()) {
        throw GridMismatch("two-mode fields differ in length");
    }
    madelung_forward(a1, scratch.field[0]);
    madelung_forward(a2, scratch.field[1]);
    const int k = coupled_polar(scratch, params, h, dt, scheme);
    madelung_inverse(scratch.field[0], a1);
    madelung_inverse(scratch.field[1], a2);
    return k;
}

std::array<double, 2> two_mode_characteristic_speeds(double gamma, double s_steep, double b,
                                                     double own, double other) {
    return {gamma * s_steep * (3.0 * own + b * other), gamma * s_steep * (own + b * other)};
}

}  // namespace fiberprop
