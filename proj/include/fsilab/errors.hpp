#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fsilab {

// Hierarchy used to map failures onto CLI exit codes:
// config errors -> 3, divergence -> 2, solver errors -> 4.

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& msg) : std::runtime_error(msg) {}
};

class ElementInversionError : public std::runtime_error {
 public:
  ElementInversionError(int element, const std::string& msg)
      : std::runtime_error(msg), element_id(element) {}
  int element_id;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& msg, std::vector<double> residuals)
      : std::runtime_error(msg), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, int step, double time)
      : std::runtime_error(msg), step_index(step), sim_time(time) {}
  int step_index;
  double sim_time;
};

class NotSettledError : public std::runtime_error {
 public:
  explicit NotSettledError(const std::string& msg) : std::runtime_error(msg) {}
};

class UnsupportedRegimeError : public std::runtime_error {
 public:
  explicit UnsupportedRegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fsilab
