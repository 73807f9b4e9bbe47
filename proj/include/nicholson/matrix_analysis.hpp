#pragma once

// Cooperative-matrix algebra: Frobenius normal form, spectral bound via
// Perron power iteration, M-matrix tests, positive-vector feasibility and
// small dense solves.

#include "nicholson/common.hpp"

#include <optional>
#include <vector>

namespace nicholson {

struct FrobeniusForm {
  // permutation[p] = original index placed at position p.
  std::vector<Eigen::Index> permutation;
  std::vector<Eigen::Index> block_sizes;
  // Patch indices (original numbering, ascending) of each block, in block order.
  std::vector<std::vector<Eigen::Index>> block_members;
  std::vector<Matrix> blocks;

  std::size_t block_count() const { return blocks.size(); }
  // Offset of block b inside the permuted ordering.
  Eigen::Index block_offset(std::size_t b) const;
  // P M P^T for the stored permutation; block upper-triangular.
  Matrix permuted(const Matrix& m) const;
};

struct SpectralResult {
  double bound = 0.0;
  std::size_t achieving_block = 0;
  std::vector<double> per_block_bounds;
  // Present only when the whole matrix is irreducible.
  std::optional<Vector> right_vector;
  std::optional<Vector> left_vector;
  long iterations = 0;
};

/// Strongly connected components of the digraph with an edge j -> i whenever
/// m(i, j) > 0 (i != j). Blocks are ordered so the permuted matrix is block
/// upper-triangular: a block only receives inflow from blocks placed after it.
FrobeniusForm strongly_connected_blocks(const Matrix& m);

bool is_irreducible(const Matrix& m);

bool is_cooperative(const Matrix& m);

struct PerronResult {
  double root = 0.0;  // spectral bound of the (unshifted) block
  Vector vector;      // strictly positive, unit max-norm
  long iterations = 0;
};

/// Perron root and vector of an irreducible cooperative matrix. Shifts the
/// diagonal to be >= 1 and iterates until the Collatz-Wielandt bracket is
/// narrower than 1e-12 (relative); throws NumericError after 1e5 iterations.
PerronResult perron_power_iteration(const Matrix& block);

/// s(M) = max over irreducible diagonal blocks of their Perron roots.
SpectralResult spectral_bound(const Matrix& m);
SpectralResult spectral_bound(const Matrix& m, const FrobeniusForm& form);

bool is_nonsingular_m_matrix(const Matrix& n);

/// c in [1, 1e6]^n with (Mc)_i >= eps * max(1, ||M||_inf) for every i, via a
/// phase-one simplex feasibility solve; empty when infeasible at this margin.
std::optional<Vector> find_positive_c(const Matrix& m, double eps);

/// Tries the margins 1e-2, 1e-4, 1e-8 in turn.
std::optional<Vector> find_positive_c(const Matrix& m);

inline constexpr double kPositiveCeiling = 1e6;
inline constexpr double kPositiveMargins[] = {1e-2, 1e-4, 1e-8};

/// Gaussian elimination with partial pivoting. Throws NumericError when a
/// pivot falls below 1e-12 * ||N||_inf.
Vector linear_solve(const Matrix& n, const Vector& b);

/// Determinant via the same elimination (no singularity check).
double determinant(const Matrix& n);

}  // namespace nicholson
