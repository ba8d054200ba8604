#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

// Syntax or name-resolution failure in assertion text. `position` is the
// byte offset into the input where the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int position)
        : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    int position() const { return position_; }

private:
    int position_ = 0;
};

// Operand/result type mismatch detected while parsing or building an
// expression (e.g. a numeric operand handed to a boolean connective).
class TypeError : public std::runtime_error {
public:
    TypeError(const std::string& msg, int position)
        : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    int position() const { return position_; }

private:
    int position_ = 0;
};

// Malformed persisted data: state repository files, config JSON, or states
// that do not conform to a signature.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSubjectError : public std::runtime_error {
public:
    explicit UnknownSubjectError(const std::string& name)
        : std::runtime_error("unknown subject '" + name + "'") {}
};

} // namespace aoi
