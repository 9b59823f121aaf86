#pragma once

#include <stdexcept>
#include <string>

namespace pcr99 {

/// Solver terminated without ever seeing 3 or more consistent
/// correspondences; there is no transform to report.
struct InsufficientInliersError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scene specification that cannot be realized (e.g. fewer than 3 inliers).
struct BadSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Two points of a pair coincide where a distance ratio is required.
struct CoincidentPointsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& path, int line_number, const std::string& detail)
      : std::runtime_error(path + ":" + std::to_string(line_number) + ": " + detail),
        line(line_number) {}
  int line;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pcr99
