#include "fiberprop/propagator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fiberprop/error.hpp"

namespace fiberprop {
namespace {

// Relative slack when checking step ends against the map length; z = j h
// accumulates rounding of order j ulp.
constexpr double kLengthSlack = 1e-9;

LinearCoefficients linear_part(const FiberParams& p, double delta) {
    return {p.alpha, p.beta2, p.beta3, delta};
}

bool all_zero(std::span<const Complex> a) {
    return std::all_of(a.begin(), a.end(), [](const Complex& v) { return v == Complex{}; });
}

void check_interval(const DispersionMap& map, double z, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument(fmt::format("step size must be positive, got {}", h));
    }
    if (z < 0.0 || z + h > map.length() * (1.0 + kLengthSlack)) {
        throw InvalidArgument(fmt::format("step [{}, {}] m leaves the fiber of length {} m", z,
                                          z + h, map.length()));
    }
}

template <class Diag>
void record(std::vector<Diag>* out, Diag d) {
    if (out != nullptr) out->push_back(d);
}

std::pair<double, double> peak_and_energy(std::span<const Complex> a, double dt) {
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& v : a) {
        const double i = std::norm(v);
        peak = std::max(peak, i);
        sum += i;
    }
    return {peak, sum * dt};
}

bool wants_record(const SimConfig& cfg, int step) {
    if (cfg.diagnostics_every <= 0) return false;
    return step % cfg.diagnostics_every == 0 || step == cfg.m_steps;
}

}  // namespace

DispersionMap::DispersionMap(std::vector<MapSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw InvalidArgument("dispersion map needs at least one segment");
    }
    double z = 0.0;
    for (const auto& s : segments_) {
        if (s.z_start != z) {
            throw InvalidArgument(
                fmt::format("segment starting at {} m leaves a gap or overlap at {} m", s.z_start, z));
        }
        if (!(s.z_end > s.z_start) || !std::isfinite(s.z_end)) {
            throw InvalidArgument(
                fmt::format("segment [{}, {}] m has non-positive length", s.z_start, s.z_end));
        }
        s.params.validate();
        z = s.z_end;
    }
}

DispersionMap DispersionMap::constant(const FiberParams& params, double length) {
    return DispersionMap({MapSegment{0.0, length, params}});
}

DispersionMap DispersionMap::tiled(const std::vector<std::pair<double, FiberParams>>& pattern,
                                   double length) {
    if (pattern.empty()) throw InvalidArgument("tiling pattern is empty");
    if (!(length > 0.0)) throw InvalidArgument("fiber length must be positive");
    for (const auto& [len, p] : pattern) {
        if (!(len > 0.0)) throw InvalidArgument("tiled segment lengths must be positive");
    }
    std::vector<MapSegment> segs;
    // Boundaries are accumulated from whole periods to avoid drift over many tiles.
    double period = 0.0;
    for (const auto& entry : pattern) period += entry.first;
    for (std::size_t tile = 0;; ++tile) {
        double z = static_cast<double>(tile) * period;
        for (const auto& [len, p] : pattern) {
            if (z >= length) return DispersionMap(std::move(segs));
            const double end = std::min(z + len, length);
            segs.push_back({segs.empty() ? 0.0 : segs.back().z_end, end, p});
            z += len;
        }
    }
}

const FiberParams& DispersionMap::at(double z) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), z,
                               [](double v, const MapSegment& s) { return v < s.z_end; });
    if (it == segments_.end()) return segments_.back().params;
    return it->params;
}

FiberParams average_params(const DispersionMap& map, double z0, double z1) {
    if (!(z0 >= 0.0) || !(z1 > z0) || z1 > map.length() * (1.0 + kLengthSlack)) {
        throw InvalidArgument(fmt::format("averaging interval [{}, {}] m outside the fiber [0, {}] m",
                                          z0, z1, map.length()));
    }
    z1 = std::min(z1, map.length());
    const auto segs = map.segments();
    for (const auto& s : segs) {
        if (z0 >= s.z_start && z1 <= s.z_end) return s.params;
    }
    FiberParams m;
    m.alpha = m.beta2 = m.beta3 = m.gamma = m.s_steep = m.t_raman = m.lambda0 = 0.0;
    for (const auto& s : segs) {
        const double lo = std::max(z0, s.z_start);
        const double hi = std::min(z1, s.z_end);
        if (hi <= lo) continue;
        const double w = hi - lo;
        m.alpha += w * s.params.alpha;
        m.beta2 += w * s.params.beta2;
        m.beta3 += w * s.params.beta3;
        m.gamma += w * s.params.gamma;
        m.s_steep += w * s.params.s_steep;
        m.t_raman += w * s.params.t_raman;
        m.lambda0 += w * s.params.lambda0;
    }
    const double len = z1 - z0;
    m.alpha /= len;
    m.beta2 /= len;
    m.beta3 /= len;
    m.gamma /= len;
    m.s_steep /= len;
    m.t_raman /= len;
    m.lambda0 /= len;
    return m;
}

void SimConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument(fmt::format("step size must be positive, got {}", h));
    }
    if (m_steps < 0) {
        throw InvalidArgument(fmt::format("step count must be >= 0, got {}", m_steps));
    }
}

void TwoModeFiber::validate() const {
    if (!std::isfinite(delta)) throw InvalidArgument("group-velocity mismatch must be finite");
    for (int k = 0; k < 2; ++k) {
        if (!(b_xpm[k] >= 0.0) || !(c_xpm[k] >= 0.0)) {
            throw InvalidArgument("cross-phase factors B_k, C_k must be non-negative");
        }
    }
}

SingleModeStepper::SingleModeStepper(const SimGrid& grid, Scheme scheme)
    : grid_(grid), scheme_(scheme), workspace_(grid.size()) {}

const LinearHalfStepPlan& SingleModeStepper::plan_for(const LinearCoefficients& c, double h) {
    for (const auto& p : plans_) {
        if (p.h() == h && p.coefficients() == c) return p;
    }
    // Piecewise maps visit few distinct coefficient sets; keep a short list.
    constexpr std::size_t kMaxPlans = 8;
    if (plans_.size() == kMaxPlans) plans_.erase(plans_.begin());
    plans_.push_back(LinearHalfStepPlan::build(grid_, c, h));
    return plans_.back();
}

int SingleModeStepper::step(std::span<Complex> a, const DispersionMap& map, double z, double h) {
    if (a.size() != grid_.size()) {
        throw GridMismatch(fmt::format("field has {} samples, stepper grid {}", a.size(),
                                       grid_.size()));
    }
    check_interval(map, z, h);
    const double zm = z + 0.5 * h;
    const double ze = z + h;
    apply_linear_half_step_in_place(a, plan_for(linear_part(average_params(map, z, zm), 0.0), h),
                                    workspace_);
    const FiberParams full = average_params(map, z, ze);
    const NonlinearStepParams np{full.gamma, full.s_steep, full.t_raman, scheme_};
    const int k = nonlinear_operator_apply_in_place(a, np, h, grid_.dt(), scratch_);
    apply_linear_half_step_in_place(
        a, plan_for(linear_part(average_params(map, zm, ze), 0.0), h), workspace_);
    return k;
}

TwoModeStepper::TwoModeStepper(const SimGrid& grid, Scheme scheme) : linear_(grid, scheme) {}

int TwoModeStepper::step(std::span<Complex> a1, std::span<Complex> a2, const TwoModeFiber& fiber,
                         double z, double h) {
    const std::size_t n = linear_.grid_.size();
    if (a1.size() != n || a2.size() != n) {
        throw GridMismatch("two-mode fields do not match the stepper grid");
    }
    check_interval(fiber.maps[0], z, h);
    check_interval(fiber.maps[1], z, h);
    const std::array<std::span<Complex>, 2> a{a1, a2};
    // An absent field stays absent; skipping it keeps the remaining field on
    // exactly the single-mode arithmetic.
    const std::array<bool, 2> active{!all_zero(a1), !all_zero(a2)};
    const double zm = z + 0.5 * h;
    const double ze = z + h;
    const std::array<double, 2> delta{0.0, fiber.delta};

    for (int f = 0; f < 2; ++f) {
        if (!active[f]) continue;
        const auto c = linear_part(average_params(fiber.maps[f], z, zm), delta[f]);
        apply_linear_half_step_in_place(a[f], linear_.plan_for(c, h), linear_.workspace_);
    }

    TwoModeParams tp;
    tp.mode[0] = average_params(fiber.maps[0], z, ze);
    tp.mode[1] = average_params(fiber.maps[1], z, ze);
    tp.delta = fiber.delta;
    tp.b_xpm = fiber.b_xpm;
    tp.c_xpm = fiber.c_xpm;
    int k = 1;
    if (active[0] || active[1]) {
        if (active[0] && !active[1]) {
            const NonlinearStepParams np{tp.mode[0].gamma, tp.mode[0].s_steep,
                                         tp.mode[0].t_raman, linear_.scheme_};
            k = nonlinear_operator_apply_in_place(a1, np, h, linear_.grid_.dt(), linear_.scratch_);
        } else if (!active[0] && active[1]) {
            const NonlinearStepParams np{tp.mode[1].gamma, tp.mode[1].s_steep,
                                         tp.mode[1].t_raman, linear_.scheme_};
            k = nonlinear_operator_apply_in_place(a2, np, h, linear_.grid_.dt(), linear_.scratch_);
        } else {
            k = coupled_nonlinear_apply_in_place(a1, a2, tp, h, linear_.grid_.dt(),
                                                 linear_.scheme_, scratch_);
        }
    }

    for (int f = 0; f < 2; ++f) {
        if (!active[f]) continue;
        const auto c = linear_part(average_params(fiber.maps[f], zm, ze), delta[f]);
        apply_linear_half_step_in_place(a[f], linear_.plan_for(c, h), linear_.workspace_);
    }
    return k;
}

ComplexEnvelope ssfm_step_single(const ComplexEnvelope& a, const DispersionMap& map, double z,
                                 double h, const SimConfig& cfg) {
    if (!(a.grid() == cfg.grid)) throw GridMismatch("field grid differs from the run grid");
    SingleModeStepper stepper(cfg.grid, cfg.scheme);
    ComplexEnvelope out = a;
    stepper.step(out.samples(), map, z, h);
    return out;
}

std::array<ComplexEnvelope, 2> ssfm_step_two_mode(const std::array<ComplexEnvelope, 2>& fields,
                                                  const TwoModeFiber& fiber, double z, double h,
                                                  const SimConfig& cfg) {
    if (!(fields[0].grid() == cfg.grid) || !(fields[1].grid() == cfg.grid)) {
        throw GridMismatch("field grid differs from the run grid");
    }
    fiber.validate();
    TwoModeStepper stepper(cfg.grid, cfg.scheme);
    auto out = fields;
    stepper.step(out[0].samples(), out[1].samples(), fiber, z, h);
    return out;
}

ComplexEnvelope propagate(const ComplexEnvelope& initial, const SimConfig& cfg,
                          const DispersionMap& map, std::vector<StepDiagnostics>* diagnostics) {
    cfg.validate();
    if (!(initial.grid() == cfg.grid)) throw GridMismatch("field grid differs from the run grid");
    if (cfg.l_max() > map.length() * (1.0 + kLengthSlack)) {
        throw InvalidArgument(fmt::format("run length {} m exceeds the fiber length {} m",
                                          cfg.l_max(), map.length()));
    }
    ComplexEnvelope a = initial;
    const double dt = cfg.grid.dt();
    if (wants_record(cfg, 0)) {
        const auto [p, e] = peak_and_energy(a.samples(), dt);
        record(diagnostics, StepDiagnostics{0.0, p, e, 0});
    }
    SingleModeStepper stepper(cfg.grid, cfg.scheme);
    for (int j = 0; j < cfg.m_steps; ++j) {
        const double z = j * cfg.h;
        const int k = stepper.step(a.samples(), map, z, cfg.h);
        if (wants_record(cfg, j + 1)) {
            const auto [p, e] = peak_and_energy(a.samples(), dt);
            record(diagnostics, StepDiagnostics{(j + 1) * cfg.h, p, e, k});
        }
    }
    return a;
}

std::array<ComplexEnvelope, 2> propagate(const std::array<ComplexEnvelope, 2>& initial,
                                         const SimConfig& cfg, const TwoModeFiber& fiber,
                                         std::vector<TwoModeDiagnostics>* diagnostics) {
    cfg.validate();
    fiber.validate();
    if (!(initial[0].grid() == cfg.grid) || !(initial[1].grid() == cfg.grid)) {
        throw GridMismatch("field grid differs from the run grid");
    }
    for (const auto& m : fiber.maps) {
        if (cfg.l_max() > m.length() * (1.0 + kLengthSlack)) {
            throw InvalidArgument(fmt::format("run length {} m exceeds the fiber length {} m",
                                              cfg.l_max(), m.length()));
        }
    }
    auto a = initial;
    const double dt = cfg.grid.dt();
    auto snapshot = [&](double z, int k) {
        TwoModeDiagnostics d;
        d.z = z;
        d.substeps = k;
        for (int f = 0; f < 2; ++f) {
            std::tie(d.peak[f], d.energy[f]) = peak_and_energy(a[f].samples(), dt);
        }
        record(diagnostics, d);
    };
    if (wants_record(cfg, 0)) snapshot(0.0, 0);
    TwoModeStepper stepper(cfg.grid, cfg.scheme);
    for (int j = 0; j < cfg.m_steps; ++j) {
        const int k = stepper.step(a[0].samples(), a[1].samples(), fiber, j * cfg.h, cfg.h);
        if (wants_record(cfg, j + 1)) snapshot((j + 1) * cfg.h, k);
    }
    return a;
}

}  // namespace fiberprop
