#include "nicholson/matrix_analysis.hpp"

#include "nicholson/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace nicholson {

Eigen::Index FrobeniusForm::block_offset(std::size_t b) const {
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < b; ++i) offset += block_sizes[i];
  return offset;
}

Matrix FrobeniusForm::permuted(const Matrix& m) const {
  const auto n = static_cast<Eigen::Index>(permutation.size());
  Matrix out(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q)
      out(p, q) = m(permutation[static_cast<std::size_t>(p)], permutation[static_cast<std::size_t>(q)]);
  return out;
}

bool is_cooperative(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) < 0) return false;
  return true;
}

FrobeniusForm strongly_connected_blocks(const Matrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("strongly_connected_blocks: matrix not square");
  const auto n = m.rows();

  // Tarjan. A component is emitted only after every component reachable from
  // it, so receivers come out before the patches that feed them.
  std::vector<Eigen::Index> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack;
  std::vector<std::vector<Eigen::Index>> components;
  Eigen::Index counter = 0;

  std::function<void(Eigen::Index)> visit = [&](Eigen::Index j) {
    const auto uj = static_cast<std::size_t>(j);
    index[uj] = low[uj] = counter++;
    stack.push_back(j);
    on_stack[uj] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j || !(m(i, j) > 0)) continue;  // edge j -> i
      const auto ui = static_cast<std::size_t>(i);
      if (index[ui] < 0) {
        visit(i);
        low[uj] = std::min(low[uj], low[ui]);
      } else if (on_stack[ui]) {
        low[uj] = std::min(low[uj], index[ui]);
      }
    }
    if (low[uj] == index[uj]) {
      std::vector<Eigen::Index> component;
      Eigen::Index top;
      do {
        top = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(top)] = false;
        component.push_back(top);
      } while (top != j);
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  };
  for (Eigen::Index j = 0; j < n; ++j)
    if (index[static_cast<std::size_t>(j)] < 0) visit(j);

  FrobeniusForm form;
  for (auto& component : components) {
    const auto size = static_cast<Eigen::Index>(component.size());
    Matrix block(size, size);
    for (Eigen::Index p = 0; p < size; ++p)
      for (Eigen::Index q = 0; q < size; ++q)
        block(p, q) = m(component[static_cast<std::size_t>(p)], component[static_cast<std::size_t>(q)]);
    form.permutation.insert(form.permutation.end(), component.begin(), component.end());
    form.block_sizes.push_back(size);
    form.blocks.push_back(std::move(block));
    form.block_members.push_back(std::move(component));
  }
  return form;
}

bool is_irreducible(const Matrix& m) { return strongly_connected_blocks(m).block_count() == 1; }

PerronResult perron_power_iteration(const Matrix& block) {
  const auto n = block.rows();
  if (n == 0 || block.cols() != n) throw PreconditionError("perron_power_iteration: bad shape");
  if (n == 1) return {block(0, 0), Vector::Ones(1), 0};

  const double shift = std::max(0.0, -block.diagonal().minCoeff()) + 1.0;
  Matrix shifted = block;
  shifted.diagonal().array() += shift;

  constexpr long kMaxIterations = 100000;
  constexpr double kBracketTolerance = 1e-12;
  Vector v = Vector::Ones(n);
  for (long it = 1; it <= kMaxIterations; ++it) {
    const Vector w = shifted * v;
    const Eigen::ArrayXd ratios = w.array() / v.array();
    const double lower = ratios.minCoeff();
    const double upper = ratios.maxCoeff();
    v = w / w.maxCoeff();
    if (upper - lower < kBracketTolerance * std::max(1.0, std::abs(upper))) {
      return {0.5 * (lower + upper) - shift, v, it};
    }
  }
  throw NumericError("perron_power_iteration: Collatz-Wielandt bracket did not close");
}

SpectralResult spectral_bound(const Matrix& m) { return spectral_bound(m, strongly_connected_blocks(m)); }

SpectralResult spectral_bound(const Matrix& m, const FrobeniusForm& form) {
  if (!is_cooperative(m)) throw PreconditionError("spectral_bound: matrix is not cooperative");
  SpectralResult result;
  result.bound = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < form.block_count(); ++b) {
    const auto perron = perron_power_iteration(form.blocks[b]);
    result.per_block_bounds.push_back(perron.root);
    result.iterations += perron.iterations;
    if (perron.root > result.bound) {
      result.bound = perron.root;
      result.achieving_block = b;
    }
    if (form.block_count() == 1) {
      // Single block: the permutation is a reordering of the whole matrix.
      Vector right(m.rows());
      for (std::size_t p = 0; p < form.permutation.size(); ++p)
        right(form.permutation[p]) = perron.vector(static_cast<Eigen::Index>(p));
      result.right_vector = right;
      const auto left = perron_power_iteration(form.blocks[0].transpose());
      Vector left_orig(m.rows());
      for (std::size_t p = 0; p < form.permutation.size(); ++p)
        left_orig(form.permutation[p]) = left.vector(static_cast<Eigen::Index>(p));
      result.left_vector = left_orig;
      result.iterations += left.iterations;
    }
  }
  return result;
}

bool is_nonsingular_m_matrix(const Matrix& n) {
  if (n.rows() != n.cols() || n.rows() == 0) return false;
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    for (Eigen::Index j = 0; j < n.cols(); ++j)
      if (i != j && n(i, j) > 0) return false;
  const double bound = spectral_bound(Matrix(-n)).bound;
  return bound < -kCriticalBand * std::max(1.0, inf_norm(n));
}

std::optional<Vector> find_positive_c(const Matrix& m, double eps) {
  if (m.rows() != m.cols()) throw PreconditionError("find_positive_c: matrix not square");
  if (!(eps > 0)) throw PreconditionError("find_positive_c: margin must be positive");
  const auto n = m.rows();
  const double margin = eps * std::max(1.0, inf_norm(m));

  // c = 1 + y with 0 <= y <= ceiling - 1:  M y >= margin - M 1.
  FeasibilityProblem problem;
  problem.lhs = m;
  problem.rhs = Vector::Constant(n, margin) - m * Vector::Ones(n);
  problem.upper = Vector::Constant(n, kPositiveCeiling - 1.0);
  const auto solved = phase_one_feasible(problem);
  if (!solved.point) return std::nullopt;

  Vector c = (Vector::Ones(n) + *solved.point).cwiseMax(1.0);
  // The simplex works to a tolerance; accept only a strictly positive product.
  if (!((m * c).array() > 0).all()) return std::nullopt;
  return c;
}

std::optional<Vector> find_positive_c(const Matrix& m) {
  for (const double eps : kPositiveMargins)
    if (auto c = find_positive_c(m, eps)) return c;
  return std::nullopt;
}

namespace {

struct Factorization {
  Matrix lu;
  std::vector<Eigen::Index> pivots;
  int sign = 1;
  double smallest_pivot = std::numeric_limits<double>::infinity();
};

Factorization factorize(const Matrix& n) {
  if (n.rows() != n.cols()) throw PreconditionError("linear_solve: matrix not square");
  Factorization f{n, {}, 1};
  const auto size = n.rows();
  for (Eigen::Index k = 0; k < size; ++k) {
    Eigen::Index p;
    f.lu.col(k).tail(size - k).cwiseAbs().maxCoeff(&p);
    p += k;
    f.pivots.push_back(p);
    if (p != k) {
      f.lu.row(k).swap(f.lu.row(p));
      f.sign = -f.sign;
    }
    const double pivot = f.lu(k, k);
    f.smallest_pivot = std::min(f.smallest_pivot, std::abs(pivot));
    if (pivot == 0.0) continue;
    for (Eigen::Index i = k + 1; i < size; ++i) {
      const double factor = f.lu(i, k) / pivot;
      f.lu(i, k) = factor;
      f.lu.row(i).tail(size - k - 1) -= factor * f.lu.row(k).tail(size - k - 1);
    }
  }
  return f;
}

}  // namespace

Vector linear_solve(const Matrix& n, const Vector& b) {
  if (b.size() != n.rows()) throw PreconditionError("linear_solve: dimension mismatch");
  const auto f = factorize(n);
  const double tolerance = 1e-12 * inf_norm(n);
  if (n.rows() > 0 && !(f.smallest_pivot > tolerance)) throw NumericError("linear_solve: singular matrix");

  Vector x = b;
  for (std::size_t k = 0; k < f.pivots.size(); ++k)
    std::swap(x(static_cast<Eigen::Index>(k)), x(f.pivots[k]));
  const auto size = n.rows();
  for (Eigen::Index i = 0; i < size; ++i)
    x(i) -= f.lu.row(i).head(i).dot(x.head(i));
  for (Eigen::Index i = size - 1; i >= 0; --i)
    x(i) = (x(i) - f.lu.row(i).tail(size - i - 1).dot(x.tail(size - i - 1))) / f.lu(i, i);
  return x;
}

double determinant(const Matrix& n) {
  const auto f = factorize(n);
  return f.sign * f.lu.diagonal().prod();
}

}  // namespace nicholson
