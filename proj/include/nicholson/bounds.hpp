#pragma once

// Explicit asymptotic bounds for positive solutions: the dissipativity bound,
// closed-form bounds from the range of the gamma coefficients, and the
// permanence box obtained from a positive vector c.

#include "nicholson/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nicholson {

/// (D - A)^{-1} (beta_1, ..., beta_n)^T / e. Bounds every limsup.
Vector dissipativity_bound(const PatchSystem& sys);

struct UniformBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Requires 0 < alpha < beta and beta > 1; empty otherwise.
std::optional<UniformBounds> theorem24_bounds(double alpha_lo, double beta_hi);

struct GammaRange {
  double alpha_lo = 0.0;
  double beta_hi = 0.0;
};

/// (min ln gamma_i, max ln gamma_i) when every gamma_i is defined and > 1 and
/// the strict range hypotheses hold.
std::optional<GammaRange> gamma_exponent_range(const PatchSystem& sys);

struct PermanenceConstants {
  Vector c;
  double m_const = 0.0;
  double L_const = 0.0;
  Vector scaled_gammas;  // beta_i c_i / (d_i c_i - sum_j a_ij c_j)

  Vector lower() const { return m_const * c; }
  Vector upper() const { return L_const * c; }
};

/// beta_i c_i / (d_i c_i - sum_j a_ij c_j); empty where the denominator is not positive.
std::vector<std::optional<double>> scaled_gamma_coefficients(const PatchSystem& sys, const Vector& c);

/// Smallest admissible L and largest admissible m for the rescaled system
/// x_i -> x_i / c_i. Throws PreconditionError unless every scaled gamma exceeds 1.
PermanenceConstants permanence_constants(const PatchSystem& sys, const Vector& c);

/// True when (c, m, L, gammas) satisfy c_i m < 1, h_i(m) <= h_i(L) and
/// exp(c_i m) <= gamma_i, with h_i(x) = x exp(-c_i x).
bool satisfies_permanence_inequalities(const Vector& gammas, const Vector& c, double m_const,
                                       double L_const);

/// s_{k+1} = min{m, min_j gamma_j h_j(s_k)}; returns s_0 .. s_{k_max}.
std::vector<double> lemma21_sequence(const Vector& gammas, const Vector& cs, double m_const,
                                     double s0, long k_max);

enum class BoundSource { Dissipativity, GammaRange, Permanence, None };

std::string to_string(BoundSource source);

struct AsymptoticBounds {
  Vector upper;
  Vector lower;
  std::vector<BoundSource> upper_source;
  std::vector<BoundSource> lower_source;

  Vector dissipativity;
  std::optional<GammaRange> gamma_range;
  std::optional<UniformBounds> gamma_range_bounds;
  std::optional<PermanenceConstants> permanence;
};

/// Tightest combination of every applicable bound. `c` enables the permanence
/// box when its scaled gammas all exceed 1.
AsymptoticBounds asymptotic_bounds(const PatchSystem& sys, const std::optional<Vector>& c);

}  // namespace nicholson
