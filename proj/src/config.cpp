#include "fiberprop/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "fiberprop/error.hpp"
#include "fiberprop/units.hpp"

namespace fiberprop {
namespace {

using units::Dimension;

std::string where(const YAML::Node& n, std::string_view path) {
    const auto mark = n.Mark();
    if (mark.line < 0) return std::string(path);
    return fmt::format("line {}: {}", mark.line + 1, path);
}

std::string join(std::string_view ctx, std::string_view key) {
    return ctx.empty() ? std::string(key) : fmt::format("{}.{}", ctx, key);
}

void expect_map(const YAML::Node& n, std::string_view ctx) {
    if (!n.IsMap()) throw ConfigError(fmt::format("{}: expected a mapping", where(n, ctx)));
}

void check_keys(const YAML::Node& n, std::string_view ctx,
                std::initializer_list<std::string_view> allowed) {
    expect_map(n, ctx);
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) {
            throw ConfigError(fmt::format("{}: unknown key", where(kv.first, join(ctx, key))));
        }
    }
}

YAML::Node require(const YAML::Node& n, std::string_view key, std::string_view ctx) {
    YAML::Node v = n[std::string(key)];
    if (!v) {
        throw ConfigError(fmt::format("{}: missing required key '{}'", where(n, ctx), key));
    }
    return v;
}

template <class T>
T scalar(const YAML::Node& v, std::string_view path) {
    if (!v.IsScalar()) throw ConfigError(fmt::format("{}: expected a scalar", where(v, path)));
    try {
        return v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(fmt::format("{}: cannot read '{}'", where(v, path), v.Scalar()));
    }
}

double quantity(const YAML::Node& v, const Dimension& dim, std::string_view path) {
    if (!v.IsScalar()) throw ConfigError(fmt::format("{}: expected a quantity", where(v, path)));
    const std::string text = v.Scalar();
    return units::parse_as(text, dim, where(v, path));
}

double required_quantity(const YAML::Node& n, std::string_view key, const Dimension& dim,
                         std::string_view ctx) {
    return quantity(require(n, key, ctx), dim, join(ctx, key));
}

std::optional<double> optional_quantity(const YAML::Node& n, std::string_view key,
                                        const Dimension& dim, std::string_view ctx) {
    const YAML::Node v = n[std::string(key)];
    if (!v) return std::nullopt;
    return quantity(v, dim, join(ctx, key));
}

double dimensionless(const YAML::Node& v, std::string_view path) {
    if (!v.IsScalar()) throw ConfigError(fmt::format("{}: expected a number", where(v, path)));
    return units::parse_as(v.Scalar(), units::kDimensionless, where(v, path));
}

PulseSpec parse_pulse(const YAML::Node& n, std::string_view ctx) {
    check_keys(n, ctx, {"power", "t0", "chirp", "center"});
    PulseSpec p;
    p.power = required_quantity(n, "power", units::kPower, ctx);
    p.t0 = required_quantity(n, "t0", units::kTime, ctx);
    if (n["chirp"]) p.chirp = dimensionless(n["chirp"], join(ctx, "chirp"));
    p.center = optional_quantity(n, "center", units::kTime, ctx).value_or(0.0);
    return p;
}

// Applies whichever coefficient keys are present in `n` on top of `p`.
void apply_coefficients(const YAML::Node& n, std::string_view ctx, FiberParams& p) {
    if (auto v = optional_quantity(n, "alpha", units::kPerLength, ctx)) p.alpha = *v;
    if (auto v = optional_quantity(n, "beta2", units::kBeta2, ctx)) p.beta2 = *v;
    if (auto v = optional_quantity(n, "beta3", units::kBeta3, ctx)) p.beta3 = *v;
    if (auto v = optional_quantity(n, "gamma", units::kGamma, ctx)) p.gamma = *v;
    if (auto v = optional_quantity(n, "t_raman", units::kTime, ctx)) p.t_raman = *v;
    const auto lambda0 = optional_quantity(n, "lambda0", units::kLength, ctx);
    const auto s = optional_quantity(n, "s_steep", units::kTime, ctx);
    if (lambda0 && s) {
        throw ConfigError(fmt::format("{}: give either lambda0 or s_steep, not both",
                                      where(n, ctx)));
    }
    if (lambda0) {
        if (!(*lambda0 > 0.0)) {
            throw ConfigError(fmt::format("{}: lambda0 must be positive", where(n, ctx)));
        }
        p.lambda0 = *lambda0;
        p.s_steep = self_steepening_from_wavelength(*lambda0);
    }
    if (s) {
        p.s_steep = *s;
        p.lambda0 = 0.0;
    }
}

FiberSpec parse_fiber(const YAML::Node& n, std::string_view ctx) {
    check_keys(n, ctx,
               {"alpha", "beta2", "beta3", "gamma", "t_raman", "lambda0", "s_steep", "segments"});
    require(n, "beta2", ctx);
    require(n, "gamma", ctx);
    FiberSpec f;
    apply_coefficients(n, ctx, f.base);
    if (const YAML::Node segs = n["segments"]) {
        const std::string sctx = join(ctx, "segments");
        if (!segs.IsSequence() || segs.size() == 0) {
            throw ConfigError(fmt::format("{}: expected a non-empty list", where(segs, sctx)));
        }
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const std::string ictx = fmt::format("{}[{}]", sctx, i);
            const YAML::Node s = segs[i];
            check_keys(s, ictx,
                       {"length", "alpha", "beta2", "beta3", "gamma", "t_raman", "lambda0",
                        "s_steep"});
            const double len = required_quantity(s, "length", units::kLength, ictx);
            if (!(len > 0.0)) {
                throw ConfigError(fmt::format("{}: segment length must be positive", where(s, ictx)));
            }
            FiberParams p = f.base;
            apply_coefficients(s, ictx, p);
            f.segments.emplace_back(len, p);
        }
    }
    return f;
}

Scheme parse_scheme(const YAML::Node& v) {
    const auto s = scalar<std::string>(v, "scheme");
    if (s == "muscl") return Scheme::MusclVanAlbada;
    if (s == "upwind") return Scheme::FirstOrderUpwind;
    throw ConfigError(fmt::format("{}: expected 'muscl' or 'upwind', got '{}'", where(v, "scheme"), s));
}

std::array<double, 2> pair_of_numbers(const YAML::Node& v, std::string_view path) {
    if (!v.IsSequence() || v.size() != 2) {
        throw ConfigError(fmt::format("{}: expected a list of two numbers", where(v, path)));
    }
    return {dimensionless(v[0], fmt::format("{}[0]", path)),
            dimensionless(v[1], fmt::format("{}[1]", path))};
}

RunSpec parse_root(const YAML::Node& root) {
    expect_map(root, "document");
    RunSpec r;
    const auto mode = scalar<std::string>(require(root, "mode", ""), "mode");
    if (mode == "single") {
        r.mode = PropagationMode::SingleMode;
        check_keys(root, "", {"mode", "scheme", "grid", "propagation", "diagnostics_every",
                              "pulse", "fiber"});
    } else if (mode == "two_mode") {
        r.mode = PropagationMode::TwoMode;
        check_keys(root, "", {"mode", "scheme", "grid", "propagation", "diagnostics_every",
                              "fields", "coupling"});
    } else {
        throw ConfigError(fmt::format("{}: expected 'single' or 'two_mode', got '{}'",
                                      where(root["mode"], "mode"), mode));
    }
    if (root["scheme"]) r.scheme = parse_scheme(root["scheme"]);

    const YAML::Node grid = require(root, "grid", "");
    check_keys(grid, "grid", {"n_half", "window"});
    r.n_half = scalar<int>(require(grid, "n_half", "grid"), "grid.n_half");
    r.window = required_quantity(grid, "window", units::kTime, "grid");

    const YAML::Node prop = require(root, "propagation", "");
    check_keys(prop, "propagation", {"step", "steps", "length"});
    r.h = required_quantity(prop, "step", units::kLength, "propagation");
    if (prop["steps"] && prop["length"]) {
        throw ConfigError(fmt::format("{}: give either steps or length, not both",
                                      where(prop, "propagation")));
    }
    if (prop["steps"]) {
        r.m_steps = scalar<int>(prop["steps"], "propagation.steps");
    } else if (prop["length"]) {
        const double len = quantity(prop["length"], units::kLength, "propagation.length");
        const double m = std::round(len / r.h);
        if (!(r.h > 0.0) || std::abs(m * r.h - len) > 1e-9 * std::abs(len)) {
            throw ConfigError(fmt::format("{}: length is not a whole number of steps",
                                          where(prop["length"], "propagation.length")));
        }
        r.m_steps = static_cast<int>(m);
    } else {
        throw ConfigError(fmt::format("{}: missing required key 'steps' (or 'length')",
                                      where(prop, "propagation")));
    }
    if (root["diagnostics_every"]) {
        r.diagnostics_every = scalar<int>(root["diagnostics_every"], "diagnostics_every");
    }

    if (r.mode == PropagationMode::SingleMode) {
        r.pulses[0] = parse_pulse(require(root, "pulse", ""), "pulse");
        r.fibers[0] = parse_fiber(require(root, "fiber", ""), "fiber");
    } else {
        const YAML::Node fields = require(root, "fields", "");
        if (!fields.IsSequence() || fields.size() != 2) {
            throw ConfigError(fmt::format("{}: expected a list of two fields", where(fields, "fields")));
        }
        for (int k = 0; k < 2; ++k) {
            const std::string ctx = fmt::format("fields[{}]", k);
            const YAML::Node f = fields[k];
            check_keys(f, ctx, {"pulse", "fiber"});
            r.pulses[k] = parse_pulse(require(f, "pulse", ctx), join(ctx, "pulse"));
            r.fibers[k] = parse_fiber(require(f, "fiber", ctx), join(ctx, "fiber"));
        }
        const YAML::Node c = require(root, "coupling", "");
        check_keys(c, "coupling", {"delta", "b", "c"});
        r.delta = required_quantity(c, "delta", units::kTimePerLength, "coupling");
        r.b_xpm = pair_of_numbers(require(c, "b", "coupling"), "coupling.b");
        r.c_xpm = pair_of_numbers(require(c, "c", "coupling"), "coupling.c");
    }
    r.validate();
    return r;
}

}  // namespace

DispersionMap FiberSpec::build(double length) const {
    if (segments.empty()) return DispersionMap::constant(base, length);
    return DispersionMap::tiled(segments, length);
}

SimGrid RunSpec::grid() const { return make_grid(n_half, window); }

SimConfig RunSpec::sim_config() const {
    SimConfig c;
    c.grid = grid();
    c.h = h;
    c.m_steps = m_steps;
    c.scheme = scheme;
    c.mode = mode;
    c.diagnostics_every = diagnostics_every;
    return c;
}

DispersionMap RunSpec::map(int field) const {
    // A zero-length run still needs a non-empty fiber.
    const double len = m_steps > 0 ? length() : h;
    return fibers[field].build(len);
}

TwoModeFiber RunSpec::two_mode_fiber() const {
    return TwoModeFiber{{map(0), map(1)}, delta, b_xpm, c_xpm};
}

ComplexEnvelope RunSpec::initial_field(int field) const {
    const auto& p = pulses[field];
    return gaussian_pulse(grid(), p.power, p.t0, p.chirp, p.center);
}

void RunSpec::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (n_half < 2) fail(fmt::format("grid.n_half must be >= 2, got {}", n_half));
    if (!(window > 0.0)) fail("grid.window must be positive");
    if (!(h > 0.0)) fail("propagation.step must be positive");
    if (m_steps < 0) fail("propagation.steps must be >= 0");
    if (diagnostics_every < 0) fail("diagnostics_every must be >= 0");
    for (int k = 0; k < field_count(); ++k) {
        if (!(pulses[k].power >= 0.0)) fail("pulse power must be >= 0");
        if (!(pulses[k].t0 > 0.0)) fail("pulse t0 must be positive");
        try {
            fibers[k].base.validate();
            for (const auto& s : fibers[k].segments) s.second.validate();
        } catch (const InvalidArgument& e) {
            fail(e.what());
        }
    }
    if (mode == PropagationMode::TwoMode) {
        for (int k = 0; k < 2; ++k) {
            if (!(b_xpm[k] >= 0.0) || !(c_xpm[k] >= 0.0)) {
                fail("coupling factors b, c must be non-negative");
            }
        }
    }
}

RunSpec parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(fmt::format("line {}: {}", e.mark.line + 1, e.msg));
    }
    return parse_root(root);
}

RunSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure(fmt::format("cannot open config '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fiberprop
