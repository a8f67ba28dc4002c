#include "fiberprop/benchmarks.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "fiberprop/error.hpp"

namespace fiberprop {
namespace {

// Single ultrashort pulse in a uniform fiber.
constexpr std::string_view kPreset1 = R"yaml(mode: single
scheme: muscl
grid: {n_half: 2048, window: "30 ps"}
propagation: {step: "10 m", steps: 100}
pulse: {power: "0.625 mW", t0: "80 fs", chirp: 0}
fiber:
  alpha: "0 1/m"
  beta2: "0.5 ps^2/km"
  beta3: "0.07 ps^3/km"
  gamma: "0.1 1/(W m)"
  t_raman: "3 fs"
  lambda0: "1550 nm"
)yaml";

// Same pulse, dispersion signs alternating every 2 km over 100 km.
constexpr std::string_view kPreset2 = R"yaml(mode: single
scheme: muscl
grid: {n_half: 4096, window: "30 ps"}
propagation: {step: "40 m", steps: 2500}
pulse: {power: "0.625 mW", t0: "80 fs", chirp: 0}
fiber:
  alpha: "0 1/m"
  beta2: "0.5 ps^2/km"
  beta3: "0.07 ps^3/km"
  gamma: "0.1 1/(W m)"
  t_raman: "3 fs"
  lambda0: "1550 nm"
  segments:
    - {length: "2 km"}
    - {length: "2 km", beta2: "-0.5 ps^2/km", beta3: "-0.07 ps^3/km"}
)yaml";

// Two strongly nonlinear pulses with walk-off and cross-phase coupling.
constexpr std::string_view kPreset3 = R"yaml(mode: two_mode
scheme: muscl
grid: {n_half: 2048, window: "4 ps"}
propagation: {step: "20 m", steps: 3200}
fields:
  - pulse: {power: "0.625 mW", t0: "80 fs", chirp: 0}
    fiber:
      alpha: "0 1/m"
      beta2: "4e-5 ps^2/km"
      beta3: "0 ps^3/km"
      gamma: "1 1/(W m)"
      t_raman: "0 fs"
      lambda0: "1550 nm"
  - pulse: {power: "0.3125 mW", t0: "80 fs", chirp: 0}
    fiber:
      alpha: "0 1/m"
      beta2: "4e-5 ps^2/km"
      beta3: "0 ps^3/km"
      gamma: "1.2 1/(W m)"
      t_raman: "0 fs"
      lambda0: "1300 nm"
coupling: {delta: "0.015625 fs/m", b: [2, 2], c: [2, 2]}
)yaml";

// Both pulses through the dispersion-managed line.
constexpr std::string_view kPreset4 = R"yaml(mode: two_mode
scheme: muscl
grid: {n_half: 4096, window: "30 ps"}
propagation: {step: "40 m", steps: 2500}
fields:
  - pulse: {power: "0.625 mW", t0: "80 fs", chirp: 0}
    fiber:
      alpha: "0 1/m"
      beta2: "0.5 ps^2/km"
      beta3: "0.07 ps^3/km"
      gamma: "0.1 1/(W m)"
      t_raman: "3 fs"
      lambda0: "1550 nm"
      segments:
        - {length: "2 km"}
        - {length: "2 km", beta2: "-0.5 ps^2/km", beta3: "-0.07 ps^3/km"}
  - pulse: {power: "0.3125 mW", t0: "80 fs", chirp: 0}
    fiber:
      alpha: "0 1/m"
      beta2: "0.5 ps^2/km"
      beta3: "0.07 ps^3/km"
      gamma: "0.1 1/(W m)"
      t_raman: "3 fs"
      lambda0: "1300 nm"
      segments:
        - {length: "2 km"}
        - {length: "2 km", beta2: "-0.5 ps^2/km", beta3: "-0.07 ps^3/km"}
coupling: {delta: "0.015625 fs/m", b: [2, 2], c: [2, 2]}
)yaml";

}  // namespace

std::string_view preset_yaml(int id) {
    switch (id) {
        case 1: return kPreset1;
        case 2: return kPreset2;
        case 3: return kPreset3;
        case 4: return kPreset4;
        default: throw InvalidArgument(fmt::format("no benchmark preset {}", id));
    }
}

RunSpec preset(int id) { return parse_config(std::string(preset_yaml(id))); }

RunSpec refine(const RunSpec& spec, int factor) {
    if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
    RunSpec r = spec;
    r.n_half *= factor;
    r.h /= factor;
    r.m_steps *= factor;
    return r;
}

std::vector<std::vector<double>> final_intensities(const RunSpec& spec) {
    SimConfig cfg = spec.sim_config();
    cfg.diagnostics_every = 0;
    if (spec.mode == PropagationMode::SingleMode) {
        return {propagate(spec.initial_field(0), cfg, spec.map(0)).intensity()};
    }
    const auto out =
        propagate({spec.initial_field(0), spec.initial_field(1)}, cfg, spec.two_mode_fiber());
    return {out[0].intensity(), out[1].intensity()};
}

std::vector<ConvergenceLadder> run_convergence(const RunSpec& base, int rungs,
                                               int reference_factor, int jobs) {
    if (rungs < 3) throw InvalidArgument("a convergence ladder needs at least 3 rungs");
    if (reference_factor < 2 || (reference_factor & (reference_factor - 1)) != 0) {
        throw InvalidArgument("reference factor must be a power of two >= 2");
    }
    // Task 0 is the reference; it is the most expensive and starts first.
    std::vector<RunSpec> specs;
    specs.push_back(refine(base, (1 << (rungs - 1)) * reference_factor));
    for (int r = 0; r < rungs; ++r) specs.push_back(refine(base, 1 << r));

    std::vector<std::vector<std::vector<double>>> results(specs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                results[i] = final_intensities(specs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(specs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    const SimGrid ref_grid = specs[0].grid();
    std::vector<ConvergenceLadder> ladders(base.field_count());
    for (int f = 0; f < base.field_count(); ++f) {
        auto& L = ladders[f];
        L.reference_n_half = specs[0].n_half;
        L.reference_h = specs[0].h;
        L.reference_m_steps = specs[0].m_steps;
        for (int r = 0; r < rungs; ++r) {
            const RunSpec& s = specs[r + 1];
            const double e = error_maxnorm(results[r + 1][f], s.grid(), results[0][f], ref_grid);
            L.rungs.push_back({s.n_half, s.h, s.m_steps, e});
        }
    }
    return ladders;
}

}  // namespace fiberprop
