#include "nicholson/equilibrium.hpp"

#include "nicholson/bounds.hpp"
#include "nicholson/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nicholson {

Matrix jacobian(const PatchSystem& sys, const Vector& x) {
  if (x.size() != sys.n()) throw PreconditionError("jacobian: dimension mismatch");
  Matrix j = sys.a;
  const Vector totals = sys.birth_totals();
  for (Eigen::Index i = 0; i < sys.n(); ++i) j(i, i) += totals(i) * ricker_derivative(x(i)) - sys.d(i);
  return j;
}

NewtonResult damped_newton(const PatchSystem& sys, const Vector& start, int max_iterations) {
  if (start.size() != sys.n() || !(start.array() > 0).all())
    throw PreconditionError("damped_newton: start must be a positive vector of size n");
  NewtonResult out{start, rhs_ode(sys, start).lpNorm<Eigen::Infinity>(), 0, false};
  const auto tolerance = [&](const Vector& x) { return 1e-10 * (1.0 + x.lpNorm<Eigen::Infinity>()); };

  for (; out.iterations < max_iterations; ++out.iterations) {
    if (out.residual <= 1e-3 * tolerance(out.x)) break;
    const Vector f = rhs_ode(sys, out.x);
    Vector step;
    try {
      step = linear_solve(jacobian(sys, out.x), -f);
    } catch (const NumericError&) {
      break;
    }
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 60; ++halving, scale *= 0.5) {
      const Vector candidate = out.x + scale * step;
      if (!(candidate.array() > 0).all()) continue;
      const double residual = rhs_ode(sys, candidate).lpNorm<Eigen::Infinity>();
      if (residual < out.residual) {
        out.x = candidate;
        out.residual = residual;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no further decrease available in floating point
  }
  out.converged = out.residual <= tolerance(out.x);
  return out;
}

Vector sub_equilibrium_start(const PatchSystem& sys, const Vector& c) {
  const Vector unit = c / c.maxCoeff();
  for (double eps : {0.5, 0.1, 0.01, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
    const Vector x = eps * unit;
    if ((rhs_ode(sys, x).array() > 0).all()) return x;
  }
  throw NumericError("sub_equilibrium_start: f(eps c) > 0 fails on the whole ladder");
}

namespace {

Vector rk4_step(const PatchSystem& sys, const Vector& x, double dt) {
  const Vector k1 = rhs_ode(sys, x);
  const Vector k2 = rhs_ode(sys, (x + 0.5 * dt * k1).cwiseMax(0.0));
  const Vector k3 = rhs_ode(sys, (x + 0.5 * dt * k2).cwiseMax(0.0));
  const Vector k4 = rhs_ode(sys, (x + dt * k3).cwiseMax(0.0));
  return (x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).cwiseMax(0.0);
}

}  // namespace

BracketFlow monotone_bracket_flow(const PatchSystem& sys, const Vector& c) {
  if (c.size() != sys.n() || !(c.array() > 0).all())
    throw PreconditionError("monotone_bracket_flow: c must be a positive vector of size n");
  if (!((sys.community_matrix() * c).array() > 0).all())
    throw PreconditionError("monotone_bracket_flow: requires M c > 0");

  const double lipschitz = (sys.d + sys.birth_totals()).maxCoeff() + inf_norm(sys.a);
  const double dt = std::min(0.05, 1.0 / lipschitz);
  const long steps_per_sample = std::max<long>(1, std::lround(1.0 / dt));
  constexpr double kMaxTime = 1e5;

  BracketFlow flow;
  flow.lower = sub_equilibrium_start(sys, c);
  flow.upper = 2.0 * dissipativity_bound(sys);
  while (flow.time < kMaxTime) {
    const Vector lower_prev = flow.lower;
    const Vector upper_prev = flow.upper;
    for (long s = 0; s < steps_per_sample; ++s) {
      flow.lower = rk4_step(sys, flow.lower, dt);
      flow.upper = rk4_step(sys, flow.upper, dt);
    }
    flow.time += steps_per_sample * dt;
    const double change = std::max((flow.lower - lower_prev).lpNorm<Eigen::Infinity>(),
                                   (flow.upper - upper_prev).lpNorm<Eigen::Infinity>());
    if (change < 1e-10) {
      flow.converged = true;
      break;
    }
  }
  return flow;
}

EquilibriumCertificate certify_saturated(const PatchSystem& sys, const Vector& x_star) {
  if (x_star.size() != sys.n() || !(x_star.array() > 0).all())
    throw PreconditionError("certify_saturated: x_star must be strictly positive");
  EquilibriumCertificate cert;
  cert.x_star = x_star;
  cert.residual = rhs_ode(sys, x_star).lpNorm<Eigen::Infinity>();
  if (cert.residual > 1e-10 * (1.0 + x_star.lpNorm<Eigen::Infinity>()))
    throw PreconditionError("certify_saturated: residual too large");

  const Matrix j = jacobian(sys, x_star);
  cert.saturation_product_positive = ((-j * x_star).array() > 0).all();
  cert.neg_jacobian_is_nsM = is_nonsingular_m_matrix(-j);
  cert.jacobian_spectral_bound = spectral_bound(j).bound;
  const double det = determinant(-j);
  cert.index = det > 0 ? 1 : (det < 0 ? -1 : 0);
  cert.max_component = x_star.maxCoeff();
  cert.a2_window = cert.max_component <= 2.0;
  return cert;
}

std::optional<EquilibriumCertificate> solve_positive_equilibrium(const PatchSystem& sys) {
  require_valid(sys);
  const auto c = find_positive_c(sys.community_matrix());
  if (!c) return std::nullopt;

  const auto flow = monotone_bracket_flow(sys, *c);

  // The orbit from eps c increases toward x*, so its limit is a lower bound;
  // roots below it sit on the boundary of the cone.
  const Vector floor = (1.0 - 1e-6) * flow.lower;
  std::optional<NewtonResult> best;
  for (const Vector& start : {sub_equilibrium_start(sys, *c), dissipativity_bound(sys),
                              Vector(0.5 * (flow.lower + flow.upper))}) {
    auto result = damped_newton(sys, start);
    if (!result.converged || (result.x.array() < floor.array()).any()) continue;
    if (!best || result.residual < best->residual) best = result;
  }
  if (!best) throw NumericError("solve_positive_equilibrium: Newton did not converge to the positive root");

  auto cert = certify_saturated(sys, best->x);
  cert.newton_iterations = best->iterations;
  cert.flow_deviation = std::max((best->x - flow.lower).lpNorm<Eigen::Infinity>(),
                                 (best->x - flow.upper).lpNorm<Eigen::Infinity>());
  cert.flow = flow;
  return cert;
}

DelayRobustnessVerdict delay_robustness(const PatchSystem& sys, const Vector& x_star) {
  if (x_star.size() != sys.n()) throw PreconditionError("delay_robustness: dimension mismatch");
  DelayRobustnessVerdict out;
  const Vector totals = sys.birth_totals();
  out.diagonal_lambdas.resize(sys.n());
  for (Eigen::Index i = 0; i < sys.n(); ++i)
    out.diagonal_lambdas(i) = sys.d(i) - totals(i) * std::abs(ricker_derivative(x_star(i)));
  out.n_hat = -sys.a;
  out.n_hat.diagonal() = out.diagonal_lambdas;
  out.verdict = is_nonsingular_m_matrix(out.n_hat) ? DelayVerdict::RobustlyStable
                                                   : DelayVerdict::PotentiallyDelayUnstable;
  return out;
}

}  // namespace nicholson
