#pragma once

#include <stdexcept>
#include <string>

namespace sarsim {

/// Invalid parameters or inconsistent inputs (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. k <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure such as quadrature non-convergence (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data structure, e.g. a pyramid whose planes do not fit together.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kQuiet = 0, kWarning = 1, kInfo = 2 };

void set_log_level(LogLevel level);
LogLevel log_level();
void log_warning(const std::string& message);
void log_info(const std::string& message);

}  // namespace sarsim
