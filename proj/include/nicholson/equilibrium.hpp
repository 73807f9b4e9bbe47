#pragma once

// Positive equilibrium of the undelayed system f(x) = 0 (shared with the
// delay system), its certification, and the delay-robustness indicator.

#include "nicholson/model.hpp"

#include <optional>

namespace nicholson {

/// Df(x) = A - D + diag(beta_i (1 - x_i) exp(-x_i)).
Matrix jacobian(const PatchSystem& sys, const Vector& x);

struct NewtonResult {
  Vector x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton's method on f(x) = 0 with step halving (at most 60 halvings) so the
/// iterate stays strictly positive and the residual decreases.
NewtonResult damped_newton(const PatchSystem& sys, const Vector& start, int max_iterations = 200);

struct BracketFlow {
  Vector lower;  // limit of the non-decreasing orbit from eps * c
  Vector upper;  // limit of the non-increasing orbit from 2 * dissipativity bound
  double time = 0.0;
  bool converged = false;
};

/// Integrates the undelayed system from a sub-equilibrium and a
/// super-equilibrium start until both orbits move less than 1e-10 per unit time.
BracketFlow monotone_bracket_flow(const PatchSystem& sys, const Vector& c);

/// Largest eps in {0.5, 0.1, 0.01, ...} with f(eps c) > 0, for c scaled to unit max-norm.
Vector sub_equilibrium_start(const PatchSystem& sys, const Vector& c);

struct EquilibriumCertificate {
  Vector x_star;
  double residual = 0.0;
  double jacobian_spectral_bound = 0.0;
  bool neg_jacobian_is_nsM = false;
  bool saturation_product_positive = false;  // -Df(x*) x* > 0
  int index = 0;                             // sign of det(-Df(x*)); 0 when singular
  double max_component = 0.0;
  bool a2_window = false;                    // every x*_i <= 2

  // Filled by solve_positive_equilibrium.
  int newton_iterations = 0;
  std::optional<BracketFlow> flow;
  double flow_deviation = 0.0;
};

std::optional<EquilibriumCertificate> solve_positive_equilibrium(const PatchSystem& sys);

EquilibriumCertificate certify_saturated(const PatchSystem& sys, const Vector& x_star);

enum class DelayVerdict { RobustlyStable, PotentiallyDelayUnstable };

struct DelayRobustnessVerdict {
  Matrix n_hat;
  Vector diagonal_lambdas;
  DelayVerdict verdict = DelayVerdict::PotentiallyDelayUnstable;
};

/// N_hat = diag(d_i - beta_i |h'(x*_i)|) - A; robust when N_hat is a
/// non-singular M-matrix.
DelayRobustnessVerdict delay_robustness(const PatchSystem& sys, const Vector& x_star);

}  // namespace nicholson
