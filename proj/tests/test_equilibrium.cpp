#include <doctest.h>

#include "battery.hpp"
#include "nicholson/bounds.hpp"
#include "nicholson/equilibrium.hpp"
#include "nicholson/matrix_analysis.hpp"

#include <cmath>
#include <random>

using namespace nicholson;

namespace {

PatchSystem scalar_system(double d, double beta) {
  return battery::single_delay(Vector{{d}}, Matrix::Zero(1, 1), Vector{{beta}}, Vector{{1.0}});
}

const Vector kTwoPatchRoot{{0.29138657378460086, 0.65642787478073901}};
const Vector kDelayUnstableRoot{{1.6878987375362856, 2.4394812798148613}};
constexpr double kTrivialRootFloor = 1e-6;

}  // namespace

TEST_CASE("jacobian examples") {
  const auto sys = battery::two_patch_migration();
  CHECK((jacobian(sys, Vector::Zero(2)) - sys.community_matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(jacobian(scalar_system(2, 3), Vector{{std::log(1.5)}})(0, 0) ==
        doctest::Approx(-0.81093021621632876).epsilon(1e-14));
  CHECK_THROWS_AS(jacobian(sys, Vector::Zero(3)), PreconditionError);
}

TEST_CASE("jacobian matches central differences") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int s = 0; s < 10; ++s) {
    battery::RandomOptions opt;
    opt.n = 1 + s % 5;
    opt.m = 1 + s % 2;
    const auto sys = battery::random_system(rng, opt);
    const double h = 1e-5;
    for (int k = 0; k < 100; ++k) {
      const Vector x = Vector::NullaryExpr(sys.n(), [&] { return u(rng); });
      Matrix fd(sys.n(), sys.n());
      for (Eigen::Index j = 0; j < sys.n(); ++j) {
        Vector e = Vector::Zero(sys.n());
        e(j) = h;
        fd.col(j) = (rhs_ode(sys, x + e) - rhs_ode(sys, x - e)) / (2 * h);
      }
      CHECK((fd - jacobian(sys, x)).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("scalar equilibrium is log(beta / d)") {
  const auto sys = scalar_system(2, 3);
  const auto cert = solve_positive_equilibrium(sys);
  REQUIRE(cert);
  CHECK(cert->x_star(0) == doctest::Approx(0.40546510810816438).epsilon(1e-12));
  REQUIRE(cert->flow);
  CHECK(cert->flow->lower(0) == doctest::Approx(std::log(1.5)).epsilon(1e-8));
  CHECK(cert->flow->upper(0) == doctest::Approx(std::log(1.5)).epsilon(1e-8));

  const auto robust = delay_robustness(sys, cert->x_star);
  CHECK(robust.verdict == DelayVerdict::RobustlyStable);
  CHECK(robust.diagonal_lambdas(0) == doctest::Approx(2 * std::log(1.5)).epsilon(1e-10));
}

TEST_CASE("two-patch equilibrium and certificate") {
  const auto sys = battery::two_patch_migration();
  const auto cert = solve_positive_equilibrium(sys);
  REQUIRE(cert);
  CHECK((cert->x_star - kTwoPatchRoot).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(cert->residual <= 1e-10 * (1 + cert->x_star.lpNorm<Eigen::Infinity>()));
  CHECK(cert->neg_jacobian_is_nsM);
  CHECK(cert->saturation_product_positive);
  CHECK(cert->index == 1);
  CHECK(cert->jacobian_spectral_bound < 0);
  CHECK(cert->a2_window);
  REQUIRE(cert->flow);
  CHECK(cert->flow->converged);
  CHECK(cert->flow_deviation < 1e-6);

  const auto robust = delay_robustness(sys, cert->x_star);
  CHECK(robust.verdict == DelayVerdict::RobustlyStable);
  CHECK(robust.diagonal_lambdas(0) == doctest::Approx(2.4705050826727626).epsilon(1e-10));
  CHECK(robust.diagonal_lambdas(1) == doctest::Approx(1.4653664948569516).epsilon(1e-10));
  CHECK(robust.n_hat(0, 1) == -1.0);
  CHECK(robust.n_hat(1, 0) == -1.0);
}

TEST_CASE("equilibria of the undelayed system are equilibria of the delay system") {
  const auto sys = battery::two_patch_migration();
  const auto cert = solve_positive_equilibrium(sys);
  REQUIRE(cert);
  CHECK(rhs_dde(sys, cert->x_star, cert->x_star.replicate(1, sys.m())).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("one-way system has no positive equilibrium") {
  CHECK_FALSE(solve_positive_equilibrium(battery::one_way(1, 2, 3, 1, 0.5)));
}

TEST_CASE("monotone flow preconditions") {
  const auto sys = battery::two_patch_migration();
  CHECK_THROWS_AS(monotone_bracket_flow(sys, Vector{{1.0, 1.0}}), PreconditionError);
  CHECK_THROWS_AS(monotone_bracket_flow(sys, Vector{{-1.0, 2.5}}), PreconditionError);

  PatchSystem dying = sys;
  dying.beta *= 0.2;
  CHECK_THROWS_AS(monotone_bracket_flow(dying, Vector{{1.0, 2.5}}), PreconditionError);

  const auto flow = monotone_bracket_flow(sys, Vector{{1.0, 2.5}});
  CHECK(flow.converged);
  CHECK((flow.lower - kTwoPatchRoot).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK((flow.upper - kTwoPatchRoot).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("delay-unstable system: x* above 2 and a non-robust N_hat") {
  const auto sys = battery::delay_unstable(2.0);
  const auto cert = solve_positive_equilibrium(sys);
  REQUIRE(cert);
  CHECK((cert->x_star - kDelayUnstableRoot).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK_FALSE(cert->a2_window);
  CHECK(cert->max_component > 2.0);
  const auto robust = delay_robustness(sys, cert->x_star);
  CHECK(robust.verdict == DelayVerdict::PotentiallyDelayUnstable);
  CHECK(robust.diagonal_lambdas(0) == doctest::Approx(1.6184067714911064).epsilon(1e-10));
  CHECK(robust.diagonal_lambdas(1) == doctest::Approx(0.11702730715499710).epsilon(1e-9));
}

TEST_CASE("weak return migration makes the second diagonal entry negative") {
  // With a21 small, x*_2 approaches its isolated value and d_2 - beta_2 |h'(x*_2)| < 0.
  const auto sys = battery::delay_unstable(3.5, 0.01);
  const auto cert = solve_positive_equilibrium(sys);
  REQUIRE(cert);
  const auto robust = delay_robustness(sys, cert->x_star);
  CHECK(robust.diagonal_lambdas(1) < 0);
  CHECK(robust.verdict == DelayVerdict::PotentiallyDelayUnstable);
}

TEST_CASE("certify_saturated rejects non-positive or inexact inputs") {
  const auto sys = battery::two_patch_migration();
  CHECK_THROWS_AS(certify_saturated(sys, Vector::Zero(2)), PreconditionError);
  CHECK_THROWS_AS(certify_saturated(sys, Vector{{0.3, 0.6}}), PreconditionError);
}

TEST_CASE("damped Newton keeps iterates positive") {
  const auto sys = battery::delay_unstable(2.0);
  const auto r = damped_newton(sys, Vector{{1e-6, 50.0}});
  CHECK((r.x.array() > 0).all());
  if (r.converged) CHECK((r.x - kDelayUnstableRoot).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK_THROWS_AS(damped_newton(sys, Vector{{-1.0, 1.0}}), PreconditionError);
}

TEST_CASE("certificates on random feasible systems") {
  std::mt19937_64 rng(59);
  for (const auto& c : battery::feasible_battery(40, 61)) {
    const auto cert = solve_positive_equilibrium(c.sys);
    REQUIRE(cert);
    CHECK((cert->x_star.array() > 0).all());
    CHECK(cert->neg_jacobian_is_nsM);
    CHECK(cert->saturation_product_positive);
    CHECK(cert->index == 1);
    CHECK(cert->jacobian_spectral_bound < 0);
    CHECK(cert->flow_deviation <= 1e-6);

    const Vector box = dissipativity_bound(c.sys);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const Vector start = box.cwiseProduct(Vector::NullaryExpr(c.sys.n(), [&] { return 0.01 + 0.99 * u(rng); }));
      const auto r = damped_newton(c.sys, start);
      // Runs that slide into the trivial root are not positive equilibria.
      if (r.converged && r.x.minCoeff() > kTrivialRootFloor)
        CHECK((r.x - cert->x_star).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
  }
}
