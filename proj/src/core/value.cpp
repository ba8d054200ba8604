#include "core/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace aoi {

std::string type_name(Type t) {
    return t == Type::Boolean ? "boolean" : "number";
}

double round_value(double v, int digits) {
    if (!std::isfinite(v)) throw std::invalid_argument("round_value: non-finite value");
    if (digits < 0) throw std::invalid_argument("round_value: negative digit count");
    if (digits > 17) digits = 17; // beyond double resolution, rounding is the identity

    // printf performs correctly-rounded decimal conversion with ties to even.
    char buf[512];
    int n = std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    if (n < 0 || n >= static_cast<int>(sizeof buf))
        throw std::invalid_argument("round_value: unrepresentable value");
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string number_text(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace aoi
