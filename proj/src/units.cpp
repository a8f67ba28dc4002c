#include "fiberprop/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace fiberprop::units {
namespace {

struct Factor {
    double scale = 1.0;
    Dimension dim;
};

Factor multiply(const Factor& a, const Factor& b, int sign) {
    Factor r;
    r.scale = sign > 0 ? a.scale * b.scale : a.scale / b.scale;
    for (int i = 0; i < 3; ++i) r.dim.exp[i] = a.dim.exp[i] + sign * b.dim.exp[i];
    return r;
}

Factor power(const Factor& a, int n) {
    Factor r;
    r.scale = std::pow(a.scale, n);
    for (int i = 0; i < 3; ++i) r.dim.exp[i] = a.dim.exp[i] * n;
    return r;
}

bool is_ident_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || (static_cast<unsigned char>(c) & 0x80) != 0;
}

// Canonical scales: time in ps, length in m, power in W.
bool base_unit(std::string_view name, Factor& out) {
    if (name == "s") {
        out = {1e12, kTime};
    } else if (name == "m") {
        out = {1.0, kLength};
    } else if (name == "W") {
        out = {1.0, kPower};
    } else {
        return false;
    }
    return true;
}

bool prefix_scale(std::string_view p, double& out) {
    static constexpr std::pair<std::string_view, double> table[] = {
        {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6}, {"\xC2\xB5", 1e-6},
        {"m", 1e-3},  {"c", 1e-2},  {"k", 1e3},  {"M", 1e6},  {"G", 1e9}};
    for (const auto& [name, scale] : table) {
        if (p == name) {
            out = scale;
            return true;
        }
    }
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Factor parse() {
        skip_ws();
        if (pos_ == s_.size()) return {};
        Factor f = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character");
        return f;
    }

private:
    Factor expr() {
        Factor acc = factor();
        for (;;) {
            const bool had_space = skip_ws();
            if (pos_ == s_.size() || s_[pos_] == ')') return acc;
            if (s_[pos_] == '/') {
                ++pos_;
                skip_ws();
                acc = multiply(acc, factor(), -1);
            } else if (s_[pos_] == '*') {
                ++pos_;
                skip_ws();
                acc = multiply(acc, factor(), +1);
            } else if (had_space) {
                acc = multiply(acc, factor(), +1);
            } else {
                fail("expected an operator");
            }
        }
    }

    Factor factor() {
        Factor a = atom();
        const std::size_t after_atom = pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            skip_ws();
            a = power(a, integer());
        } else {
            pos_ = after_atom;
        }
        return a;
    }

    Factor atom() {
        if (pos_ == s_.size()) fail("unit expected");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            skip_ws();
            Factor inner = expr();
            if (pos_ == s_.size() || s_[pos_] != ')') fail("missing ')'");
            ++pos_;
            return inner;
        }
        if (c == '1') {
            ++pos_;
            return {};
        }
        if (!is_ident_char(c)) fail("unit expected");
        const std::size_t start = pos_;
        while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
        return lookup(s_.substr(start, pos_ - start));
    }

    int integer() {
        int sign = 1;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            sign = s_[pos_] == '-' ? -1 : 1;
            ++pos_;
        }
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc{}) fail("integer exponent expected");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return sign * v;
    }

    Factor lookup(std::string_view name) {
        if (name == "dB") return {std::log(10.0) / 10.0, kDimensionless};
        Factor f;
        if (base_unit(name, f)) return f;
        for (std::size_t split = 1; split < name.size(); ++split) {
            double scale = 0.0;
            if (prefix_scale(name.substr(0, split), scale) && base_unit(name.substr(split), f)) {
                f.scale *= scale;
                return f;
            }
        }
        throw UnitError(fmt::format("unknown unit '{}'", name));
    }

    bool skip_ws() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
        return pos_ != start;
    }

    [[noreturn]] void fail(std::string_view what) const {
        throw UnitError(fmt::format("{} at position {} in unit '{}'", what, pos_, s_));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Dimension& d) {
    static constexpr const char* names[] = {"ps", "m", "W"};
    std::string out;
    for (int i = 0; i < 3; ++i) {
        if (d.exp[i] == 0) continue;
        if (!out.empty()) out += ' ';
        out += names[i];
        if (d.exp[i] != 1) out += fmt::format("^{}", d.exp[i]);
    }
    return out.empty() ? "1" : out;
}

Quantity parse_quantity(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) != 0) ++pos;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) {
        throw UnitError(fmt::format("'{}' does not start with a number", text));
    }
    if (!std::isfinite(value)) throw UnitError(fmt::format("'{}' is not finite", text));
    const auto rest = text.substr(static_cast<std::size_t>(ptr - text.data()));
    const Factor f = Parser(rest).parse();
    return {value * f.scale, f.dim};
}

double parse_as(std::string_view text, const Dimension& expected, std::string_view what) {
    Quantity q;
    try {
        q = parse_quantity(text);
    } catch (const UnitError& e) {
        throw UnitError(fmt::format("{}: {}", what, e.what()));
    }
    if (!(q.dim == expected)) {
        throw UnitError(fmt::format("{}: '{}' has dimension {}, expected {}", what, text,
                                    to_string(q.dim), to_string(expected)));
    }
    return q.value;
}

}  // namespace fiberprop::units
