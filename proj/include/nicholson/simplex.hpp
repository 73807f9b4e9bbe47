#pragma once

#include "nicholson/common.hpp"

#include <optional>

namespace nicholson {

struct FeasibilityProblem {
  Matrix lhs;    // rows of  lhs * x >= rhs
  Vector rhs;
  Vector upper;  // 0 <= x <= upper; empty means unbounded above
};

struct FeasibilityResult {
  std::optional<Vector> point;
  long pivots = 0;
  double infeasibility = 0.0;  // optimal phase-one objective
};

/// Dense tableau phase-one simplex with Bland's rule. Returns a point when the
/// phase-one optimum is zero within tolerance.
FeasibilityResult phase_one_feasible(const FeasibilityProblem& problem);

}  // namespace nicholson
