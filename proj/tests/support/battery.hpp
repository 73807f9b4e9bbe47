#pragma once

// Named systems and seeded random generators shared by the unit and
// acceptance tests.

#include "nicholson/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace battery {

using nicholson::Matrix;
using nicholson::PatchSystem;
using nicholson::Vector;

/// One delay per patch.
PatchSystem single_delay(Vector d, Matrix a, Vector beta, Vector tau);

/// beta = (1, 3), d = (3, 2), a12 = a21 = 1.
PatchSystem two_patch_migration(double a12 = 1.0, Vector tau = Vector{{5.0, 10.0}});

/// One-way migration from patch 1 into patch 2 (a12 = 0).
PatchSystem one_way(double beta1, double d1, double beta2, double d2, double a21, Vector tau = Vector{{1.0, 1.0}});

/// d = (2, 1, 3), beta = (5, 10, 3), a13 = a21 = a23 = 1, weak links a12 = a31 = a32.
PatchSystem three_patch(double weak);

/// a12 = a21 = 1, d = (2, 2), beta = (3, 15), tau = (1, tau2).
PatchSystem delay_unstable(double tau2, double a21 = 1.0);

/// n = 3, a_ij = 0.1 off the diagonal, d = 1, gamma_i = e^{1.2}, e^{1.35}, e^{1.5}.
PatchSystem gamma_range_system();

struct RandomOptions {
  Eigen::Index n = 3;
  Eigen::Index m = 1;
  double density = 0.6;     // probability of each off-diagonal migration link
  bool irreducible = false; // resample until M is irreducible
  double beta_low = 0.05;   // beta_i / d_i range
  double beta_high = 4.0;
  double tau_low = 0.5;
  double tau_high = 4.0;
  double min_abs_bound = 1e-6;  // reject near-critical draws
};

/// Random system satisfying every validation rule, with |s(M)| >= min_abs_bound.
PatchSystem random_system(std::mt19937_64& rng, const RandomOptions& opt);

/// Random cooperative matrix with a sparse non-negative off-diagonal part.
Matrix random_cooperative(std::mt19937_64& rng, Eigen::Index n, double density);

struct Case {
  std::string name;
  PatchSystem sys;
};

/// Fixed scenario battery for the simulation properties (seeded, deterministic).
std::vector<Case> simulation_battery();

/// Random systems with n <= 5 and a feasible positive vector c.
std::vector<Case> feasible_battery(std::size_t count, std::uint64_t seed);

}  // namespace battery
