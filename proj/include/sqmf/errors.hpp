#pragma once

#include <stdexcept>
#include <string>

namespace sqmf {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when the QSPA residual collapses before r columns are found.
struct RankDeficiencyError : std::runtime_error {
  int step;
  explicit RankDeficiencyError(int step_, const std::string& msg)
      : std::runtime_error(msg), step(step_) {}
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A source column of W has zero norm (a_pp ~ 0 in the QHNLS normal matrix).
struct ZeroSourceError : std::runtime_error {
  int source;
  explicit ZeroSourceError(int source_, const std::string& msg)
      : std::runtime_error(msg), source(source_) {}
};

struct ConvergenceError : std::runtime_error {
  int failures;
  explicit ConvergenceError(int failures_, const std::string& msg)
      : std::runtime_error(msg), failures(failures_) {}
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  long offset;
  explicit FormatError(long offset_, const std::string& msg)
      : std::runtime_error(msg), offset(offset_) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sqmf
