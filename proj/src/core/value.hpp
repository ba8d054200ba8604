#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace aoi {

enum class Type { Boolean, Number };

std::string type_name(Type t);

// A program-state value: boolean or finite double.
using Value = std::variant<bool, double>;

inline Type value_type(const Value& v) {
    return std::holds_alternative<bool>(v) ? Type::Boolean : Type::Number;
}

// Half-even rounding of `v` to `digits` decimal places. Negative zero is
// normalized to +0 so rounded values have a single representation.
// Throws std::invalid_argument on non-finite input or digits < 0.
double round_value(double v, int digits);

// Shortest decimal text that parses back to exactly `v`.
std::string number_text(double v);

} // namespace aoi
