#pragma once

// Parameters of the n-patch Nicholson blowflies system
//
//   x_i'(t) = -d_i x_i(t) + sum_j a_ij x_j(t) + sum_k beta_ik h(x_i(t - tau_ik)),
//
// with the Ricker birth response h(x) = x exp(-x).

#include "nicholson/common.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace nicholson {

struct PatchSystem {
  Vector d;     // decay rates, size n
  Matrix a;     // migration a(i, j): flow from patch j into patch i, zero diagonal
  Matrix beta;  // birth coefficients, n x m
  Matrix tau;   // delays, n x m
  bool enforce_mortality_form = true;

  Eigen::Index n() const { return d.size(); }
  Eigen::Index m() const { return beta.cols(); }

  // beta_i = sum_k beta_ik
  Vector birth_totals() const { return beta.rowwise().sum(); }
  // d_i - sum_j a_ji
  Vector mortalities() const { return d - a.colwise().sum().transpose(); }
  double tau_max() const { return tau.size() ? tau.maxCoeff() : 0.0; }
  double tau_min() const { return tau.size() ? tau.minCoeff() : 0.0; }

  // M = A + B - D
  Matrix community_matrix() const;
  // D - A
  Matrix decay_minus_migration() const;
};

struct Violation {
  std::string rule;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  Vector derived_mortalities;
  double tau_max = 0.0;
};

/// Checks every structural rule and reports all violations; never throws.
ValidationReport validate_system(const PatchSystem& sys);

/// Throws PreconditionError listing the violated rules when `sys` is invalid.
void require_valid(const PatchSystem& sys);

template <typename Scalar>
Scalar ricker(Scalar x) {
  if (x < Scalar(0)) throw PreconditionError("ricker: negative argument");
  using std::exp;
  return x * exp(-x);
}

template <typename Scalar>
Scalar ricker_derivative(Scalar x) {
  using std::exp;
  return (Scalar(1) - x) * exp(-x);
}

/// gamma_i = beta_i / (d_i - sum_j a_ij); empty where the denominator is not positive.
std::vector<std::optional<double>> gamma_coefficients(const PatchSystem& sys);

/// Right-hand side of the delay system. delayed(i, k) holds x_i(t - tau_ik).
Vector rhs_dde(const PatchSystem& sys, const Vector& x_now, const Matrix& delayed);

/// Right-hand side of the undelayed system f(x).
Vector rhs_ode(const PatchSystem& sys, const Vector& x);

}  // namespace nicholson
