#ifndef PRODNET_ERRORS_HPP
#define PRODNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prodnet {

/// Configuration rejected by validate_network (lists every violated constraint).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class IndexOutOfRange : public std::out_of_range {
 public:
  explicit IndexOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

/// A NaN or infinity appeared in the state during time stepping.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(const std::string& msg, int processor, int cell, int step)
      : std::runtime_error(msg), processor(processor), cell(cell), step(step) {}
  int processor;
  int cell;
  int step;
};

class UnsupportedShape : public std::runtime_error {
 public:
  explicit UnsupportedShape(const std::string& msg) : std::runtime_error(msg) {}
};

class AssumptionViolated : public std::runtime_error {
 public:
  explicit AssumptionViolated(const std::string& msg) : std::runtime_error(msg) {}
};

class UnknownScenario : public std::runtime_error {
 public:
  explicit UnknownScenario(const std::string& msg) : std::runtime_error(msg) {}
};

class OracleMismatch : public std::runtime_error {
 public:
  explicit OracleMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prodnet

#endif
