#pragma once

#include <string_view>
#include <vector>

#include "fiberprop/analysis.hpp"
#include "fiberprop/config.hpp"

namespace fiberprop {

/// Embedded YAML of benchmark presets 1..4.
std::string_view preset_yaml(int id);
RunSpec preset(int id);

/// n_half and M multiplied by `factor`, h divided by it (same fiber length).
RunSpec refine(const RunSpec& spec, int factor);

/// Final intensity of every field of the run.
std::vector<std::vector<double>> final_intensities(const RunSpec& spec);

/// Ladder of `rungs` runs starting at `base`, each doubling n_half and M and
/// halving h, scored against a reference `reference_factor` times finer than
/// the last rung. One ladder per field. Runs are independent and spread over
/// `jobs` threads.
std::vector<ConvergenceLadder> run_convergence(const RunSpec& base, int rungs,
                                               int reference_factor, int jobs = 1);

}  // namespace fiberprop
