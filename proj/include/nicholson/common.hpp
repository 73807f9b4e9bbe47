#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nicholson {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Input violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (singular pivot, no convergence, blow-up).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Band around zero inside which a spectral bound is treated as critical.
inline constexpr double kCriticalBand = 1e-10;

inline double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace nicholson
