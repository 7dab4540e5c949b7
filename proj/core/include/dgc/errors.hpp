#pragma once

#include <stdexcept>
#include <string>

namespace dgc {

// Quadrature refinements failed to agree within the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A defaulted name is used in a conditioning set without its residual.
class MissingResidual : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An intensity that must be positive evaluated to zero.
class DegenerateHazard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The density family does not satisfy the tail-ratio hypotheses on the tested range.
class ThresholdUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema violation in a configuration or state file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& message)
      : std::runtime_error(format(field, line, message)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }

  std::string field_;
  int line_;
};

}  // namespace dgc
