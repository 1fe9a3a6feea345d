#ifndef DECISION_GATE_ERRORS_HPP
#define DECISION_GATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgate {

// Malformed or inconsistent input files / arguments (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid but statistically infeasible design (CLI exit code 3).
class planning_error : public std::runtime_error {
 public:
  explicit planning_error(const std::string& what) : std::runtime_error(what) {}
};

// Results roster does not match the design plan (CLI exit code 2).
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dgate

#endif
