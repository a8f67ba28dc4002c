#pragma once

// Library side of the command-line tool: CSV emission and the run,
// convergence and benchmark subcommands.
//
// CSV columns (values with 17 significant digits):
//   <prefix>field[_k].csv        T_ps, re, im, intensity_W
//   <prefix>spectrum[_k].csv     freq_offset_THz, wavelength_nm, power_Wps, power_norm
//   <prefix>diagnostics[_k].csv  z_m, peak_W, energy_Wps, substeps_k
//   <prefix>convergence[_k].csv  n_half, h_m, m_steps, error_W
// _k (1 or 2) is appended in two-mode runs. wavelength_nm is empty when the
// fiber has no carrier wavelength.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fiberprop/analysis.hpp"
#include "fiberprop/config.hpp"
#include "fiberprop/propagator.hpp"

namespace fiberprop::cli {

/// Exit codes of the tool.
enum ExitCode : int {
    kOk = 0,
    kOtherError = 1,
    kConfigError = 2,
    kIoError = 3,
    kNumericalError = 4,
    kCheckFailed = 5,
};

/// Writes through a temporary file renamed into place, so readers never see
/// a partial file. Throws std::ios_base::failure.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string field_csv(const ComplexEnvelope& a);
std::string spectrum_csv(const PowerSpectrum& s);
std::string diagnostics_csv(const std::vector<StepDiagnostics>& d);
std::string ladder_csv(const ConvergenceLadder& ladder);

/// Propagates the run and writes field, spectrum and diagnostics CSVs.
void run_command(const RunSpec& spec, const std::string& prefix, std::ostream& log);

/// Runs the ladder, writes one CSV per field and prints the fitted orders
/// (NaN for a field with zero error on some rung).
std::vector<double> convergence_command(const RunSpec& base, int rungs, int reference_factor,
                                        int jobs, const std::string& prefix, std::ostream& log);

struct BenchmarkOptions {
    std::optional<int> n_half;
    std::optional<double> h;  // m
    std::optional<int> steps;
    bool gamma_zero = false;
    std::optional<std::string> prefix;  // write run CSVs when set
};

/// Preset `id` with the overrides applied.
RunSpec benchmark_spec(int id, const BenchmarkOptions& opt);

/// Runs benchmark `id` and prints one PASS/FAIL line per check.
/// Returns true when every check passed.
bool benchmark_command(int id, const BenchmarkOptions& opt, std::ostream& log);

}  // namespace fiberprop::cli
