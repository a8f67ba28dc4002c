#pragma once

// Symmetric split-step driver.
//
// One step of size h from z:
//   A*  = exp(h/2 D[z, z+h/2]) A
//   A** = N_h[gamma over z, z+h](A*)
//   A'  = exp(h/2 D[z+h/2, z+h]) A**
// where bracketed coefficients are exact length-weighted means over the
// interval. The two-mode step applies the same sequence per field, with the
// coupled nonlinear operator in the middle and delta entering field 2 only.

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fiberprop/grid.hpp"
#include "fiberprop/linear_op.hpp"
#include "fiberprop/nonlinear_single.hpp"
#include "fiberprop/nonlinear_twomode.hpp"
#include "fiberprop/spectral.hpp"

namespace fiberprop {

struct MapSegment {
    double z_start = 0.0;  // m
    double z_end = 0.0;    // m
    FiberParams params;
};

/// Piecewise-constant fiber parameters over [0, length()].
class DispersionMap {
public:
    /// Segments must start at 0, be contiguous and have positive length.
    explicit DispersionMap(std::vector<MapSegment> segments);

    static DispersionMap constant(const FiberParams& params, double length);

    /// Repeats `pattern` (pairs of segment length and parameters) end to end
    /// until `length` is covered; the last copy is cut at `length`.
    static DispersionMap tiled(const std::vector<std::pair<double, FiberParams>>& pattern,
                               double length);

    double length() const { return segments_.back().z_end; }
    std::span<const MapSegment> segments() const { return segments_; }

    /// Parameters at z (right-continuous; z == length() gives the last segment).
    const FiberParams& at(double z) const;

private:
    std::vector<MapSegment> segments_;
};

/// Exact length-weighted mean of every coefficient over [z0, z1]. Returns
/// the segment's parameters unchanged when the interval lies inside one.
FiberParams average_params(const DispersionMap& map, double z0, double z1);

enum class PropagationMode { SingleMode, TwoMode };

struct SimConfig {
    SimGrid grid{2, 1.0};
    double h = 0.0;  // m
    int m_steps = 0;
    Scheme scheme = Scheme::MusclVanAlbada;
    PropagationMode mode = PropagationMode::SingleMode;
    int diagnostics_every = 1;  // 0 disables diagnostics

    double l_max() const { return h * m_steps; }
    void validate() const;
};

struct StepDiagnostics {
    double z = 0.0;        // m
    double peak = 0.0;     // W
    double energy = 0.0;   // W ps
    int substeps = 0;      // CFL substeps of the step that reached z
};

struct TwoModeDiagnostics {
    double z = 0.0;
    std::array<double, 2> peak{};
    std::array<double, 2> energy{};
    int substeps = 0;
};

/// Field 2 sees delta in its linear operator; B and C couple the fields.
struct TwoModeFiber {
    std::array<DispersionMap, 2> maps;
    double delta = 0.0;  // ps/m
    std::array<double, 2> b_xpm{0.0, 0.0};
    std::array<double, 2> c_xpm{0.0, 0.0};

    void validate() const;
};

/// Reusable single-mode stepper: owns FFT workspace, cached linear plans and
/// polar scratch. Not thread-safe; use one per propagation.
class SingleModeStepper {
public:
    SingleModeStepper(const SimGrid& grid, Scheme scheme);

    /// Advances `a` from z to z + h in place; returns the CFL substep count.
    int step(std::span<Complex> a, const DispersionMap& map, double z, double h);

private:
    friend class TwoModeStepper;
    const LinearHalfStepPlan& plan_for(const LinearCoefficients& c, double h);

    SimGrid grid_;
    Scheme scheme_;
    SpectralWorkspace workspace_;
    std::vector<LinearHalfStepPlan> plans_;
    PolarState scratch_;
};

class TwoModeStepper {
public:
    TwoModeStepper(const SimGrid& grid, Scheme scheme);

    int step(std::span<Complex> a1, std::span<Complex> a2, const TwoModeFiber& fiber, double z,
             double h);

private:
    SingleModeStepper linear_;
    TwoModePolar scratch_;
};

ComplexEnvelope ssfm_step_single(const ComplexEnvelope& a, const DispersionMap& map, double z,
                                 double h, const SimConfig& cfg);

std::array<ComplexEnvelope, 2> ssfm_step_two_mode(const std::array<ComplexEnvelope, 2>& fields,
                                                  const TwoModeFiber& fiber, double z, double h,
                                                  const SimConfig& cfg);

/// M steps from z = 0. Diagnostics hold z = 0, every diagnostics_every-th
/// step and the final step.
ComplexEnvelope propagate(const ComplexEnvelope& initial, const SimConfig& cfg,
                          const DispersionMap& map,
                          std::vector<StepDiagnostics>* diagnostics = nullptr);

std::array<ComplexEnvelope, 2> propagate(const std::array<ComplexEnvelope, 2>& initial,
                                         const SimConfig& cfg, const TwoModeFiber& fiber,
                                         std::vector<TwoModeDiagnostics>* diagnostics = nullptr);

}  // namespace fiberprop
