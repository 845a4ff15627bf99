#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzymc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Inputs whose shape is wrong (dimension mismatch, index out of range, unknown id).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs outside a function's mathematical domain (f <= 0 for an entropy, t < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One failed invariant, reported at its worst offender.
struct Violation {
  std::string invariant;
  Index row = -1;
  Index col = -1;
  double magnitude = 0.0;
  Index count = 1;  // number of offending entries
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

}  // namespace fuzzymc
