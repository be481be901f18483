#ifndef SUBHEAT_ERRORS_HPP
#define SUBHEAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subheat {

/// Input or configuration rejected (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: stability violation, failed solve, empty fit window
/// (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace subheat

#endif
