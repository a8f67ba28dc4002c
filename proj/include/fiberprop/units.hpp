#pragma once

// Quantity strings such as "0.5 ps^2/km", "0.1 1/(W m)" or "0.2 dB/km".
//
// Grammar of the unit part (whitespace and '*' both multiply, '/' divides
// the factor that follows, '^' takes a signed integer exponent):
//   expr   := factor { ('*' | ' ' | '/') factor }
//   factor := atom [ '^' int ]
//   atom   := '1' | '(' expr ')' | [prefix] base | 'dB'
// Bases: s, m, W. Prefixes: f p n u µ m c k M G. "dB" is the power ratio
// ln(10)/10 (so "x dB/km" is a power attenuation coefficient).
// Values come back in the library's canonical units: ps, m, W.

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fiberprop::units {

/// Exponents of (time, length, power).
struct Dimension {
    std::array<int, 3> exp{0, 0, 0};
    bool operator==(const Dimension&) const = default;
};

inline constexpr Dimension kDimensionless{{0, 0, 0}};
inline constexpr Dimension kTime{{1, 0, 0}};
inline constexpr Dimension kLength{{0, 1, 0}};
inline constexpr Dimension kPower{{0, 0, 1}};
inline constexpr Dimension kPerLength{{0, -1, 0}};
inline constexpr Dimension kTimePerLength{{1, -1, 0}};
inline constexpr Dimension kBeta2{{2, -1, 0}};
inline constexpr Dimension kBeta3{{3, -1, 0}};
inline constexpr Dimension kGamma{{0, -1, -1}};

std::string to_string(const Dimension& d);

class UnitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Quantity {
    double value = 0.0;  // canonical units
    Dimension dim;
};

Quantity parse_quantity(std::string_view text);

/// Parses and checks the dimension; throws UnitError naming `what` otherwise.
double parse_as(std::string_view text, const Dimension& expected, std::string_view what);

}  // namespace fiberprop::units
