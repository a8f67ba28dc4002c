#pragma once

// Run descriptions read from YAML. Every physical quantity is a string with
// an explicit unit (see units.hpp). Schema, single mode:
//
//   mode: single                # single | two_mode
//   scheme: muscl               # muscl | upwind
//   grid: {n_half: 2048, window: "30 ps"}        # window is the half width
//   propagation: {step: "10 m", steps: 100}      # or {step, length}
//   diagnostics_every: 1        # optional, 0 disables
//   pulse: {power: "0.625 mW", t0: "80 fs", chirp: 0, center: "0 ps"}
//   fiber:
//     alpha: "0 dB/km"
//     beta2: "0.5 ps^2/km"
//     beta3: "0.07 ps^3/km"
//     gamma: "0.1 1/(W m)"
//     t_raman: "3 fs"
//     lambda0: "1550 nm"        # or s_steep: "0.82 fs"
//     segments:                 # optional, tiled periodically along z;
//       - {length: "2 km"}      # each entry overrides any of the keys above
//       - {length: "2 km", beta2: "-0.5 ps^2/km", beta3: "-0.07 ps^3/km"}
//
// Two mode replaces pulse/fiber by
//   fields: [{pulse: ..., fiber: ...}, {pulse: ..., fiber: ...}]
//   coupling: {delta: "0.015625 fs/m", b: [2, 2], c: [2, 2]}
//
// Optional keys: chirp, center, alpha, beta3, t_raman, segments,
// diagnostics_every, scheme (default muscl). Unknown keys are rejected.

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fiberprop/grid.hpp"
#include "fiberprop/propagator.hpp"

namespace fiberprop {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PulseSpec {
    double power = 0.0;   // W
    double t0 = 0.0;      // ps
    double chirp = 0.0;
    double center = 0.0;  // ps
};

struct FiberSpec {
    FiberParams base;
    /// (length m, params) tiled along z; empty means uniform `base`.
    std::vector<std::pair<double, FiberParams>> segments;

    DispersionMap build(double length) const;
};

struct RunSpec {
    PropagationMode mode = PropagationMode::SingleMode;
    Scheme scheme = Scheme::MusclVanAlbada;
    int n_half = 0;
    double window = 0.0;  // ps, half width
    double h = 0.0;       // m
    int m_steps = 0;
    int diagnostics_every = 1;
    /// Index 1 is used in two-mode runs only.
    std::array<PulseSpec, 2> pulses;
    std::array<FiberSpec, 2> fibers;
    double delta = 0.0;  // ps/m
    std::array<double, 2> b_xpm{0.0, 0.0};
    std::array<double, 2> c_xpm{0.0, 0.0};

    SimGrid grid() const;
    SimConfig sim_config() const;
    double length() const { return h * m_steps; }
    int field_count() const { return mode == PropagationMode::TwoMode ? 2 : 1; }
    DispersionMap map(int field) const;
    TwoModeFiber two_mode_fiber() const;
    ComplexEnvelope initial_field(int field) const;

    /// Checks module preconditions; throws ConfigError.
    void validate() const;
};

/// Throws ConfigError (with line and key) or units::UnitError.
RunSpec parse_config(const std::string& text);
RunSpec load_config(const std::string& path);

}  // namespace fiberprop
