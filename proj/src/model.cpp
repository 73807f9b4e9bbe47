#include "nicholson/model.hpp"

#include "nicholson/matrix_analysis.hpp"

#include <sstream>

namespace nicholson {

Matrix PatchSystem::community_matrix() const {
  Matrix m = a;
  m.diagonal() += birth_totals() - d;
  return m;
}

Matrix PatchSystem::decay_minus_migration() const {
  Matrix m = -a;
  m.diagonal() += d;
  return m;
}

namespace {

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace

ValidationReport validate_system(const PatchSystem& sys) {
  ValidationReport report;
  auto violate = [&](std::string rule, std::string message) {
    report.violations.push_back({std::move(rule), std::move(message)});
  };

  const auto n = sys.d.size();
  const auto m = sys.beta.cols();
  if (n < 1) violate("dimensions", "n must be at least 1");
  if (m < 1) violate("dimensions", "m must be at least 1");
  if (sys.a.rows() != n || sys.a.cols() != n)
    violate("dimensions", concat("a must be ", n, "x", n));
  if (sys.beta.rows() != n) violate("dimensions", concat("beta must have ", n, " rows"));
  if (sys.tau.rows() != sys.beta.rows() || sys.tau.cols() != m)
    violate("dimensions", "tau must have the same shape as beta");
  if (!report.violations.empty()) {
    report.ok = false;
    return report;
  }

  if (!sys.d.allFinite() || !sys.a.allFinite() || !sys.beta.allFinite() || !sys.tau.allFinite())
    violate("finite", "all parameters must be finite");

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sys.d(i) > 0)) violate("decay-positive", concat("d_", i + 1, " must be positive"));
    if (sys.a(i, i) != 0.0)
      violate("migration-diagonal", concat("a_", i + 1, i + 1, " must be zero"));
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && !(sys.a(i, j) >= 0))
        violate("migration-nonnegative", concat("a_", i + 1, j + 1, " must be non-negative"));
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!(sys.beta(i, k) >= 0))
        violate("birth-nonnegative", concat("beta_", i + 1, k + 1, " must be non-negative"));
      if (!(sys.tau(i, k) > 0))
        violate("delay-positive", concat("tau_", i + 1, k + 1, " must be positive"));
    }
  }

  const Vector totals = sys.birth_totals();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(totals(i) > 0))
      violate("birth-total-positive",
              concat("beta_", i + 1, " = sum_k beta_", i + 1, "k must be positive"));

  report.derived_mortalities = sys.mortalities();
  report.tau_max = sys.tau_max();

  if (sys.enforce_mortality_form) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (!(report.derived_mortalities(i) > 0))
        violate("mortality-positive",
                concat("m_", i + 1, " = d_", i + 1, " - sum_j a_j", i + 1, " = ",
                       report.derived_mortalities(i), " must be positive"));
  } else if (sys.d.allFinite() && sys.a.allFinite() &&
             !is_nonsingular_m_matrix(sys.decay_minus_migration())) {
    violate("decay-migration-m-matrix", "D - A must be a non-singular M-matrix");
  }

  report.ok = report.violations.empty();
  return report;
}

void require_valid(const PatchSystem& sys) {
  const auto report = validate_system(sys);
  if (report.ok) return;
  std::string message = "invalid patch system:";
  for (const auto& v : report.violations) message += " [" + v.rule + "] " + v.message + ";";
  throw PreconditionError(message);
}

std::vector<std::optional<double>> gamma_coefficients(const PatchSystem& sys) {
  const Vector totals = sys.birth_totals();
  const Vector outflow_margin = sys.d - sys.a.rowwise().sum();
  std::vector<std::optional<double>> gammas(static_cast<std::size_t>(sys.n()));
  for (Eigen::Index i = 0; i < sys.n(); ++i)
    if (outflow_margin(i) > 0) gammas[static_cast<std::size_t>(i)] = totals(i) / outflow_margin(i);
  return gammas;
}

Vector rhs_dde(const PatchSystem& sys, const Vector& x_now, const Matrix& delayed) {
  const auto n = sys.n();
  if (x_now.size() != n || delayed.rows() != n || delayed.cols() != sys.m())
    throw PreconditionError("rhs_dde: dimension mismatch");
  Vector out = sys.a * x_now - sys.d.cwiseProduct(x_now);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < sys.m(); ++k)
      out(i) += sys.beta(i, k) * ricker(delayed(i, k));
  return out;
}

Vector rhs_ode(const PatchSystem& sys, const Vector& x) {
  if (x.size() != sys.n()) throw PreconditionError("rhs_ode: dimension mismatch");
  return rhs_dde(sys, x, x.replicate(1, sys.m()));
}

}  // namespace nicholson
