// fiberprop: command-line front end.
//
//   fiberprop run <config.yaml> [--out PREFIX]
//   fiberprop convergence (<config.yaml> | --preset N) [--rungs R] [--reference-factor F]
//                         [--jobs J] [--out PREFIX]
//   fiberprop benchmark <1|2|3|4> [--n-half N] [--h METRES] [--steps M] [--gamma-zero]
//                       [--out PREFIX]

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <yaml-cpp/exceptions.h>

#include "fiberprop/benchmarks.hpp"
#include "fiberprop/cli.hpp"
#include "fiberprop/config.hpp"
#include "fiberprop/error.hpp"
#include "fiberprop/units.hpp"

namespace {

using namespace fiberprop;

int report(cli::ExitCode code, const std::string& what) {
    std::cerr << "fiberprop: " << what << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split-step Fourier propagation of ultrashort fiber pulses"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    std::string run_config;
    std::string run_out = "fiberprop_";
    auto* run = app.add_subcommand("run", "propagate a configured run and write CSVs");
    run->add_option("config", run_config, "YAML run description")->required();
    run->add_option("--out", run_out, "output path prefix");

    std::string conv_config;
    int conv_preset = 0;
    int rungs = 5;
    int ref_factor = 4;
    int jobs = 1;
    std::string conv_out = "fiberprop_";
    auto* conv = app.add_subcommand("convergence", "grid-refinement ladder with fitted order");
    auto* conv_cfg_opt = conv->add_option("config", conv_config, "YAML base run (first rung)");
    auto* conv_preset_opt =
        conv->add_option("--preset", conv_preset, "benchmark preset as first rung")
            ->check(CLI::Range(1, 4));
    conv_cfg_opt->excludes(conv_preset_opt);
    conv->add_option("--rungs", rungs, "number of rungs (>= 3)")->check(CLI::Range(3, 12));
    conv->add_option("--reference-factor", ref_factor, "reference refinement beyond last rung");
    conv->add_option("--jobs", jobs, "concurrent runs")->check(CLI::Range(1, 256));
    conv->add_option("--out", conv_out, "output path prefix");
    int conv_n_half = 0;
    double conv_h = 0.0;
    int conv_steps = 0;
    conv->add_option("--n-half", conv_n_half, "override first-rung n_half");
    conv->add_option("--h", conv_h, "override first-rung step in m");
    conv->add_option("--steps", conv_steps, "override first-rung step count");

    int bench_id = 0;
    cli::BenchmarkOptions bopt;
    std::string bench_out;
    auto* bench = app.add_subcommand("benchmark", "run a preset and check reference numbers");
    bench->add_option("id", bench_id, "preset 1..4")->required()->check(CLI::Range(1, 4));
    bench->add_option("--n-half", bopt.n_half, "override n_half");
    bench->add_option("--h", bopt.h, "override step in m (length kept unless --steps)");
    bench->add_option("--steps", bopt.steps, "override step count");
    bench->add_flag("--gamma-zero", bopt.gamma_zero, "switch the nonlinearity off");
    bench->add_option("--out", bench_out, "also write run CSVs with this prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfigError;
    }

    try {
        if (*run) {
            cli::run_command(load_config(run_config), run_out, std::cout);
        } else if (*conv) {
            if (conv_config.empty() && conv_preset == 0) {
                return report(cli::kConfigError, "convergence needs a config file or --preset");
            }
            cli::BenchmarkOptions o;
            if (conv_n_half > 0) o.n_half = conv_n_half;
            if (conv_h > 0.0) o.h = conv_h;
            if (conv_steps > 0) o.steps = conv_steps;
            RunSpec base = conv_preset > 0 ? cli::benchmark_spec(conv_preset, o)
                                           : load_config(conv_config);
            if (conv_preset == 0) {
                if (o.n_half) base.n_half = *o.n_half;
                if (o.h) base.h = *o.h;
                if (o.steps) base.m_steps = *o.steps;
                base.validate();
            }
            cli::convergence_command(base, rungs, ref_factor, jobs, conv_out, std::cout);
        } else if (*bench) {
            if (!bench_out.empty()) bopt.prefix = bench_out;
            if (!cli::benchmark_command(bench_id, bopt, std::cout)) return cli::kCheckFailed;
        }
    } catch (const ConfigError& e) {
        return report(cli::kConfigError, e.what());
    } catch (const units::UnitError& e) {
        return report(cli::kConfigError, e.what());
    } catch (const YAML::Exception& e) {
        return report(cli::kConfigError, e.what());
    } catch (const std::ios_base::failure& e) {
        return report(cli::kIoError, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return report(cli::kIoError, e.what());
    } catch (const CflViolation& e) {
        return report(cli::kNumericalError, e.what());
    } catch (const std::domain_error& e) {
        return report(cli::kNumericalError, e.what());
    } catch (const std::invalid_argument& e) {
        return report(cli::kConfigError, e.what());
    } catch (const std::exception& e) {
        return report(cli::kOtherError, e.what());
    }
    return cli::kOk;
}
