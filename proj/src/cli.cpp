#include "fiberprop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fiberprop/benchmarks.hpp"
#include "fiberprop/error.hpp"

namespace fiberprop::cli {
namespace {

namespace fs = std::filesystem;

std::string suffix(const RunSpec& spec, int field) {
    return spec.field_count() == 1 ? "" : fmt::format("_{}", field + 1);
}

void check_line(std::ostream& log, bool& all, bool pass, const std::string& what) {
    all = all && pass;
    fmt::print(log, "{} {}\n", pass ? "PASS" : "FAIL", what);
}

double max_abs_difference(const ComplexEnvelope& a, const ComplexEnvelope& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const ComplexEnvelope& a) {
    double m = 0.0;
    for (const auto& v : a.samples()) m = std::max(m, std::abs(v));
    return m;
}

bool benchmark1(const RunSpec& spec, const BenchmarkOptions& opt, std::ostream& log) {
    const FiberParams& f = spec.fibers[0].base;
    const PulseSpec& p = spec.pulses[0];
    fmt::print(log, "dispersion length      {:.6g} m\n", dispersion_length(p.t0, f.beta2));
    fmt::print(log, "third-order length     {:.6g} m\n", third_order_length(p.t0, f.beta3));
    fmt::print(log, "nonlinear length       {:.6g} m\n", nonlinear_length(f.gamma, p.power));

    std::vector<StepDiagnostics> diag;
    const ComplexEnvelope a0 = spec.initial_field(0);
    const ComplexEnvelope a = propagate(a0, spec.sim_config(), spec.map(0), &diag);
    if (opt.prefix) run_command(spec, *opt.prefix, log);
    const double factor = peak_power(a0) / peak_power(a);
    const double drift = std::abs(pulse_energy(a) / pulse_energy(a0) - 1.0);
    bool all = true;
    check_line(log, all, std::abs(factor / 13.9 - 1.0) <= 0.03,
               fmt::format("peak reduction factor {:.4f} (target 13.9 +- 3%)", factor));
    check_line(log, all, drift < 5e-3, fmt::format("energy drift {:.3e} (< 0.5%)", drift));
    return all;
}

bool benchmark2(const RunSpec& spec, const BenchmarkOptions& opt, std::ostream& log) {
    std::vector<StepDiagnostics> diag;
    const ComplexEnvelope a0 = spec.initial_field(0);
    const ComplexEnvelope a = propagate(a0, spec.sim_config(), spec.map(0), &diag);
    if (opt.prefix) run_command(spec, *opt.prefix, log);
    bool all = true;
    if (opt.gamma_zero) {
        const double err = max_abs_difference(a, a0) / max_abs(a0);
        check_line(log, all, err < 1e-8,
                   fmt::format("linear recovery max-norm relative error {:.3e} (< 1e-8)", err));
        return all;
    }
    std::vector<double> z, peak;
    for (const auto& d : diag) {
        z.push_back(d.z);
        peak.push_back(d.peak);
    }
    const auto period = oscillation_period(z, peak);
    check_line(log, all, period && std::abs(*period - 4000.0) <= spec.h,
               period ? fmt::format("peak-power oscillation period {:.1f} m (4000 +- {} m)",
                                    *period, spec.h)
                      : std::string("no peak-power oscillation found"));
    return all;
}

bool benchmark3(const RunSpec& spec, const BenchmarkOptions& opt, std::ostream& log) {
    const SimConfig cfg = spec.sim_config();
    const std::array<ComplexEnvelope, 2> a0{spec.initial_field(0), spec.initial_field(1)};
    const auto coupled = propagate(a0, cfg, spec.two_mode_fiber());
    if (opt.prefix) run_command(spec, *opt.prefix, log);

    RunSpec control = spec;
    control.delta = 0.0;
    const auto still = propagate(a0, cfg, control.two_mode_fiber());
    const double shift = centroid(coupled[1]) - centroid(still[1]);

    RunSpec alone = spec;
    alone.pulses[1].power = 0.0;
    const auto reduced =
        propagate({alone.initial_field(0), alone.initial_field(1)}, cfg, alone.two_mode_fiber());
    const auto single = propagate(a0[0], cfg, spec.map(0));
    const double red_err =
        error_maxnorm(reduced[0].intensity(), cfg.grid, single.intensity(), cfg.grid);

    bool all = true;
    check_line(log, all, std::abs(shift + 1.0) <= 0.02,
               fmt::format("pulse 2 centroid shift vs delta = 0: {:.4f} ps (-1.00 +- 0.02)", shift));
    check_line(log, all, red_err < 1e-12,
               fmt::format("second field absent vs single mode: {:.3e} W (< 1e-12)", red_err));
    return all;
}

bool benchmark4(const RunSpec& spec, const BenchmarkOptions& opt, std::ostream& log) {
    std::vector<TwoModeDiagnostics> diag;
    const std::array<ComplexEnvelope, 2> a0{spec.initial_field(0), spec.initial_field(1)};
    const auto a = propagate(a0, spec.sim_config(), spec.two_mode_fiber(), &diag);
    if (opt.prefix) run_command(spec, *opt.prefix, log);
    bool all = true;
    for (int f = 0; f < 2; ++f) {
        std::vector<double> z, peak;
        for (const auto& d : diag) {
            z.push_back(d.z);
            peak.push_back(d.peak[f]);
        }
        const auto period = oscillation_period(z, peak);
        check_line(log, all, period && std::abs(*period - 4000.0) <= spec.h,
                   period ? fmt::format("pulse {} oscillation period {:.1f} m (4000 +- {} m)",
                                        f + 1, *period, spec.h)
                          : fmt::format("pulse {}: no oscillation found", f + 1));
        const double walk = f == 1 ? spec.delta * spec.length() : 0.0;
        fmt::print(log, "pulse {} delay beyond walk-off: {:.2f} fs\n", f + 1,
                   (centroid(a[f]) - centroid(a0[f]) + walk) * 1e3);
    }
    return all;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure(fmt::format("cannot write '{}'", tmp.string()));
        out << contents;
        out.flush();
        if (!out) throw std::ios_base::failure(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::ios_base::failure(fmt::format("cannot rename onto '{}': {}", path, ec.message()));
    }
}

std::string field_csv(const ComplexEnvelope& a) {
    fmt::memory_buffer b;
    fmt::format_to(std::back_inserter(b), "T_ps,re,im,intensity_W\n");
    for (std::size_t i = 0; i < a.size(); ++i) {
        fmt::format_to(std::back_inserter(b), "{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       a.grid().time(i), a[i].real(), a[i].imag(), std::norm(a[i]));
    }
    return fmt::to_string(b);
}

std::string spectrum_csv(const PowerSpectrum& s) {
    fmt::memory_buffer b;
    fmt::format_to(std::back_inserter(b), "freq_offset_THz,wavelength_nm,power_Wps,power_norm\n");
    for (std::size_t i = 0; i < s.power.size(); ++i) {
        const std::string wl =
            s.wavelength_nm.empty() ? std::string() : fmt::format("{:.17g}", s.wavelength_nm[i]);
        fmt::format_to(std::back_inserter(b), "{:.17g},{},{:.17g},{:.17g}\n", s.freq_offset_thz[i],
                       wl, s.power[i], s.power_norm[i]);
    }
    return fmt::to_string(b);
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& d) {
    fmt::memory_buffer b;
    fmt::format_to(std::back_inserter(b), "z_m,peak_W,energy_Wps,substeps_k\n");
    for (const auto& r : d) {
        fmt::format_to(std::back_inserter(b), "{:.17g},{:.17g},{:.17g},{}\n", r.z, r.peak,
                       r.energy, r.substeps);
    }
    return fmt::to_string(b);
}

std::string ladder_csv(const ConvergenceLadder& ladder) {
    fmt::memory_buffer b;
    fmt::format_to(std::back_inserter(b), "n_half,h_m,m_steps,error_W\n");
    for (const auto& r : ladder.rungs) {
        fmt::format_to(std::back_inserter(b), "{},{:.17g},{},{:.17g}\n", r.n_half, r.h, r.m_steps,
                       r.error);
    }
    return fmt::to_string(b);
}

void run_command(const RunSpec& spec, const std::string& prefix, std::ostream& log) {
    spec.validate();
    const SimConfig cfg = spec.sim_config();
    std::vector<ComplexEnvelope> fields;
    std::vector<std::vector<StepDiagnostics>> diags(spec.field_count());
    if (spec.mode == PropagationMode::SingleMode) {
        fields.push_back(propagate(spec.initial_field(0), cfg, spec.map(0), &diags[0]));
    } else {
        std::vector<TwoModeDiagnostics> d2;
        const auto out =
            propagate({spec.initial_field(0), spec.initial_field(1)}, cfg, spec.two_mode_fiber(), &d2);
        fields.assign(out.begin(), out.end());
        for (const auto& d : d2) {
            for (int f = 0; f < 2; ++f) {
                diags[f].push_back({d.z, d.peak[f], d.energy[f], d.substeps});
            }
        }
    }
    for (int f = 0; f < spec.field_count(); ++f) {
        if (!fields[f].all_finite()) {
            throw std::domain_error(fmt::format("field {} became non-finite", f + 1));
        }
        const std::string sfx = suffix(spec, f);
        write_file_atomic(prefix + "field" + sfx + ".csv", field_csv(fields[f]));
        write_file_atomic(prefix + "spectrum" + sfx + ".csv",
                          spectrum_csv(power_spectrum(fields[f], spec.fibers[f].base.lambda0)));
        write_file_atomic(prefix + "diagnostics" + sfx + ".csv", diagnostics_csv(diags[f]));
        fmt::print(log, "field {}: peak {:.6e} W, energy {:.6e} W ps\n", f + 1,
                   peak_power(fields[f]), pulse_energy(fields[f]));
    }
    fmt::print(log, "wrote {}field/spectrum/diagnostics CSVs\n", prefix);
}

std::vector<double> convergence_command(const RunSpec& base, int rungs, int reference_factor,
                                        int jobs, const std::string& prefix, std::ostream& log) {
    const auto ladders = run_convergence(base, rungs, reference_factor, jobs);
    std::vector<double> orders;
    for (int f = 0; f < base.field_count(); ++f) {
        const auto& L = ladders[f];
        write_file_atomic(prefix + "convergence" + suffix(base, f) + ".csv", ladder_csv(L));
        fmt::print(log, "field {} (reference n_half={}, h={} m, M={})\n", f + 1, L.reference_n_half,
                   L.reference_h, L.reference_m_steps);
        for (const auto& r : L.rungs) {
            fmt::print(log, "  n_half={:6d} h={:10.4g} m M={:7d} E_inf={:.6e} W\n", r.n_half, r.h,
                       r.m_steps, r.error);
        }
        const bool fittable = std::all_of(L.rungs.begin(), L.rungs.end(),
                                          [](const LadderRung& r) { return r.error > 0.0; });
        if (!fittable) {
            // An absent field, or errors at round-off: no slope to fit.
            orders.push_back(std::nan(""));
            fmt::print(log, "  fitted order undefined (zero error on some rung)\n");
            continue;
        }
        orders.push_back(convergence_order(L));
        fmt::print(log, "  fitted order {:.4f}\n", orders.back());
    }
    return orders;
}

RunSpec benchmark_spec(int id, const BenchmarkOptions& opt) {
    RunSpec s = preset(id);
    const double length = s.length();
    if (opt.n_half) s.n_half = *opt.n_half;
    if (opt.h) {
        s.h = *opt.h;
        if (!opt.steps) s.m_steps = static_cast<int>(std::lround(length / s.h));
    }
    if (opt.steps) s.m_steps = *opt.steps;
    if (opt.gamma_zero) {
        for (auto& f : s.fibers) {
            f.base.gamma = 0.0;
            for (auto& seg : f.segments) seg.second.gamma = 0.0;
        }
    }
    s.validate();
    return s;
}

bool benchmark_command(int id, const BenchmarkOptions& opt, std::ostream& log) {
    const RunSpec spec = benchmark_spec(id, opt);
    fmt::print(log, "benchmark {}: n_half={} h={} m M={} L={} m\n", id, spec.n_half, spec.h,
               spec.m_steps, spec.length());
    switch (id) {
        case 1: return benchmark1(spec, opt, log);
        case 2: return benchmark2(spec, opt, log);
        case 3: return benchmark3(spec, opt, log);
        case 4: return benchmark4(spec, opt, log);
        default: throw InvalidArgument(fmt::format("no benchmark {}", id));
    }
}

}  // namespace fiberprop::cli
