#include "nicholson/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nicholson {

namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr long kMaxPivots = 200000;

struct Tableau {
  Matrix t;                        // constraint rows, last column is the right-hand side
  Vector objective;                // reduced costs, last entry is -(objective value)
  std::vector<Eigen::Index> basis;  // basic column per row

  Eigen::Index rhs_col() const { return t.cols() - 1; }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double factor = t(r, col);
      if (factor != 0.0) t.row(r) -= factor * t.row(row);
    }
    const double factor = objective(col);
    if (factor != 0.0) objective -= factor * t.row(row).transpose();
    basis[static_cast<std::size_t>(row)] = col;
  }
};

}  // namespace

FeasibilityResult phase_one_feasible(const FeasibilityProblem& problem) {
  const auto nx = problem.lhs.cols();
  const auto n_ge = problem.lhs.rows();
  if (problem.rhs.size() != n_ge) throw PreconditionError("phase_one_feasible: rhs size mismatch");
  const bool bounded = problem.upper.size() > 0;
  if (bounded && problem.upper.size() != nx)
    throw PreconditionError("phase_one_feasible: upper size mismatch");
  if (bounded && (problem.upper.array() < 0).any())
    throw PreconditionError("phase_one_feasible: negative upper bound");

  const Eigen::Index rows = n_ge + (bounded ? nx : 0);
  std::vector<bool> needs_artificial(static_cast<std::size_t>(rows), false);
  Eigen::Index artificials = 0;
  for (Eigen::Index r = 0; r < n_ge; ++r)
    if (problem.rhs(r) > 0) {
      needs_artificial[static_cast<std::size_t>(r)] = true;
      ++artificials;
    }

  // Columns: x | one slack or surplus per row | artificials | rhs
  const Eigen::Index slack0 = nx;
  const Eigen::Index art0 = nx + rows;
  Tableau tab;
  tab.t = Matrix::Zero(rows, art0 + artificials + 1);
  tab.objective = Vector::Zero(tab.t.cols());
  tab.basis.resize(static_cast<std::size_t>(rows));

  Eigen::Index next_art = art0;
  for (Eigen::Index r = 0; r < n_ge; ++r) {
    if (needs_artificial[static_cast<std::size_t>(r)]) {
      tab.t.row(r).head(nx) = problem.lhs.row(r);
      tab.t(r, slack0 + r) = -1.0;
      tab.t(r, next_art) = 1.0;
      tab.t(r, tab.rhs_col()) = problem.rhs(r);
      tab.basis[static_cast<std::size_t>(r)] = next_art++;
    } else {
      tab.t.row(r).head(nx) = -problem.lhs.row(r);
      tab.t(r, slack0 + r) = 1.0;
      tab.t(r, tab.rhs_col()) = -problem.rhs(r);
      tab.basis[static_cast<std::size_t>(r)] = slack0 + r;
    }
  }
  if (bounded) {
    for (Eigen::Index j = 0; j < nx; ++j) {
      const Eigen::Index r = n_ge + j;
      tab.t(r, j) = 1.0;
      tab.t(r, slack0 + r) = 1.0;
      tab.t(r, tab.rhs_col()) = problem.upper(j);
      tab.basis[static_cast<std::size_t>(r)] = slack0 + r;
    }
  }

  // Phase-one cost is 1 on each artificial; price out the artificial basis.
  for (Eigen::Index r = 0; r < rows; ++r)
    if (needs_artificial[static_cast<std::size_t>(r)]) tab.objective -= tab.t.row(r).transpose();
  tab.objective.segment(art0, artificials).setZero();

  FeasibilityResult result;
  const Eigen::Index priced_cols = art0 + artificials;
  while (true) {
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < priced_cols; ++j)
      if (tab.objective(j) < -kPivotTolerance) {
        entering = j;  // Bland: lowest index
        break;
      }
    if (entering < 0) break;

    Eigen::Index leaving = -1;
    double best_ratio = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double coefficient = tab.t(r, entering);
      if (coefficient <= kPivotTolerance) continue;
      const double ratio = tab.t(r, tab.rhs_col()) / coefficient;
      if (leaving < 0 || ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 &&
           tab.basis[static_cast<std::size_t>(r)] < tab.basis[static_cast<std::size_t>(leaving)])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    // Phase one is bounded below by zero, so an entering column always has a row.
    if (leaving < 0) break;
    tab.pivot(leaving, entering);
    if (++result.pivots > kMaxPivots) throw NumericError("phase_one_feasible: pivot limit reached");
  }

  result.infeasibility = -tab.objective(tab.rhs_col());
  const double scale = std::max(1.0, problem.rhs.size() ? problem.rhs.cwiseAbs().maxCoeff() : 0.0);
  if (result.infeasibility > 1e-9 * scale) return result;

  Vector x = Vector::Zero(nx);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto column = tab.basis[static_cast<std::size_t>(r)];
    if (column < nx) x(column) = std::max(0.0, tab.t(r, tab.rhs_col()));
  }
  if (bounded) x = x.cwiseMin(problem.upper);
  result.point = x;
  return result;
}

}  // namespace nicholson
