#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fiberprop/benchmarks.hpp"
#include "fiberprop/cli.hpp"
#include "fiberprop/config.hpp"
#include "fiberprop/units.hpp"

using namespace fiberprop;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("fiberprop_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kSmall = R"yaml(mode: single
grid: {n_half: 128, window: "5 ps"}
propagation: {step: "10 m", steps: 5}
pulse: {power: "0.625 mW", t0: "80 fs"}
fiber:
  beta2: "0.5 ps^2/km"
  gamma: "0.1 1/(W m)"
  lambda0: "1550 nm"
)yaml";

}  // namespace

TEST_CASE("unit parsing") {
    using namespace units;
    CHECK(parse_as("0.5 ps^2/km", kBeta2, "beta2") == doctest::Approx(5e-4).epsilon(1e-15));
    CHECK(parse_as("0.07 ps^3/km", kBeta3, "beta3") == doctest::Approx(7e-5).epsilon(1e-15));
    CHECK(parse_as("80 fs", kTime, "t0") == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(parse_as("0.625 mW", kPower, "p") == doctest::Approx(6.25e-4).epsilon(1e-15));
    CHECK(parse_as("1550 nm", kLength, "l") == doctest::Approx(1.55e-6).epsilon(1e-15));
    CHECK(parse_as("0.1 1/(W m)", kGamma, "gamma") == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(parse_as("0.1 W^-1 m^-1", kGamma, "gamma") == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(parse_as("0.015625 fs/m", kTimePerLength, "d") == doctest::Approx(1.5625e-5).epsilon(1e-15));
    CHECK(parse_as("0.2 dB/km", kPerLength, "alpha") ==
          doctest::Approx(0.2 * std::log(10.0) / 10.0 / 1000.0).epsilon(1e-15));
    CHECK(parse_as("2 km", kLength, "l") == 2000.0);
    CHECK_THROWS_AS(parse_as("0.1 W/m", kGamma, "gamma"), UnitError);
    CHECK_THROWS_AS(parse_as("3 furlongs", kLength, "l"), UnitError);
    CHECK_THROWS_AS(parse_as("ps", kTime, "t"), UnitError);
    CHECK_THROWS_AS(parse_as("1 ps^", kTime, "t"), UnitError);
}

TEST_CASE("preset 1 parses to canonical units") {
    const RunSpec s = preset(1);
    CHECK(s.mode == PropagationMode::SingleMode);
    CHECK(s.n_half == 2048);
    CHECK(s.window == 30.0);
    CHECK(s.h == 10.0);
    CHECK(s.m_steps == 100);
    CHECK(s.pulses[0].power == doctest::Approx(6.25e-4));
    CHECK(s.pulses[0].t0 == doctest::Approx(0.08));
    const auto& f = s.fibers[0].base;
    CHECK(f.beta2 == doctest::Approx(5e-4));
    CHECK(f.beta3 == doctest::Approx(7e-5));
    CHECK(f.gamma == doctest::Approx(0.1));
    CHECK(f.t_raman == doctest::Approx(3e-3));
    CHECK(f.s_steep == doctest::Approx(1.55e-6 / (2 * std::numbers::pi * 299792458.0) * 1e12));
}

TEST_CASE("presets 2 to 4 parse") {
    const RunSpec s2 = preset(2);
    CHECK(s2.length() == 100000.0);
    CHECK(s2.map(0).segments().size() == 50);
    const RunSpec s3 = preset(3);
    CHECK(s3.field_count() == 2);
    CHECK(s3.delta == doctest::Approx(1.5625e-5));
    CHECK(s3.fibers[1].base.gamma == doctest::Approx(1.2));
    CHECK(s3.b_xpm[1] == 2.0);
    CHECK(preset(4).two_mode_fiber().maps[1].segments().size() == 50);
    CHECK_THROWS(preset(5));
}

TEST_CASE("config errors name the offending key") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    std::string missing = kSmall;
    missing.replace(missing.find("  gamma"), std::string("  gamma: \"0.1 1/(W m)\"\n").size(), "");
    CHECK(message(missing).find("gamma") != std::string::npos);

    const std::string unknown = std::string(kSmall) + "colour: blue\n";
    CHECK(message(unknown).find("colour") != std::string::npos);

    std::string bad_unit = kSmall;
    bad_unit.replace(bad_unit.find("0.1 1/(W m)"), 11, "0.1 W/m");
    CHECK(message(bad_unit).find("fiber.gamma") != std::string::npos);

    const std::string both = std::string(kSmall) + "  s_steep: \"1 fs\"\n";
    CHECK_FALSE(message(both).empty());
    CHECK_FALSE(message("mode: [").empty());
    CHECK_THROWS_AS(load_config("/nonexistent/run.yaml"), std::exception);
}

TEST_CASE("run writes deterministic CSVs") {
    const RunSpec spec = parse_config(kSmall);
    const fs::path d = scratch_dir("csv");
    std::ostringstream log;
    cli::run_command(spec, (d / "a_").string(), log);
    cli::run_command(spec, (d / "b_").string(), log);
    for (const char* name : {"field.csv", "spectrum.csv", "diagnostics.csv"}) {
        const auto a = slurp(d / (std::string("a_") + name));
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(d / (std::string("b_") + name)));
    }
    const auto field = slurp(d / "a_field.csv");
    CHECK(field.rfind("T_ps,re,im,intensity_W\n", 0) == 0);
    CHECK(std::count(field.begin(), field.end(), '\n') == 257);
    fs::remove_all(d);
}

TEST_CASE("zero-power run writes zero fields") {
    std::string text = kSmall;
    text.replace(text.find("0.625 mW"), 8, "0 W");
    const RunSpec spec = parse_config(text);
    const fs::path d = scratch_dir("zero");
    std::ostringstream log;
    cli::run_command(spec, (d / "z_").string(), log);
    std::istringstream in(slurp(d / "z_field.csv"));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        const auto last = line.substr(line.rfind(',') + 1);
        CHECK(std::stod(last) == 0.0);
        ++rows;
    }
    CHECK(rows == 256);
    fs::remove_all(d);
}

TEST_CASE("two-mode run writes one file set per field") {
    RunSpec spec = preset(3);
    spec.n_half = 128;
    spec.m_steps = 5;
    const fs::path d = scratch_dir("two");
    std::ostringstream log;
    cli::run_command(spec, (d / "t_").string(), log);
    for (const char* name : {"t_field_1.csv", "t_field_2.csv", "t_spectrum_2.csv", "t_diagnostics_1.csv"}) {
        CHECK(fs::exists(d / name));
    }
    fs::remove_all(d);
}
