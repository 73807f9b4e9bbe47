// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "battery.hpp"
#include "eigen_oracle.hpp"
#include "nicholson/bounds.hpp"
#include "nicholson/classifier.hpp"
#include "nicholson/dde.hpp"
#include "nicholson/equilibrium.hpp"
#include "nicholson/matrix_analysis.hpp"
#include "nicholson/scenario.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#ifndef NICHOLSON_CLI
#error "NICHOLSON_CLI must name the CLI executable"
#endif

using namespace nicholson;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome spectral_bound_criterion() {
  const Matrix fig2a = figure_preset("2a").scenario.system.community_matrix();
  const double s2a = spectral_bound(fig2a).bound;
  const double err2a = std::abs(s2a - 9.0);

  const Matrix two = battery::two_patch_migration().community_matrix();
  const double expected = (-1.0 + std::sqrt(13.0)) / 2.0;
  const double err22 = std::abs(spectral_bound(two).bound - expected);

  std::mt19937_64 rng(20240701);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Matrix m = battery::random_cooperative(rng, 1 + k % 6, 0.5);
    worst = std::max(worst, std::abs(spectral_bound(m).bound - oracle::max_real_part(m)));
  }
  return {err2a <= 1e-9 && err22 <= 1e-9 && worst <= 1e-8,
          fmt("fig2a |s-9|=%.2e, two-patch |s-(sqrt13-1)/2|=%.2e, 500 random max dev=%.2e", err2a, err22, worst)};
}

Outcome threshold_sharpness() {
  std::mt19937_64 rng(20240702);
  int mismatches = 0, positive = 0;
  for (int k = 0; k < 200; ++k) {
    battery::RandomOptions opt;
    opt.n = 1 + k % 6;
    opt.irreducible = true;
    opt.density = 0.5;
    const auto sys = battery::random_system(rng, opt);
    const bool s_pos = spectral_bound(sys.community_matrix()).bound > 0;
    const bool has_c = find_positive_c(sys.community_matrix()).has_value();
    bool has_eq = false;
    try {
      has_eq = solve_positive_equilibrium(sys).has_value();
    } catch (const NumericError&) {
    }
    positive += s_pos;
    if (s_pos != has_c || has_c != has_eq) ++mismatches;
  }
  return {mismatches == 0, fmt("200 systems (%d with s>0), mismatches=%d", positive, mismatches)};
}

Outcome reducible_counterexample() {
  const auto sys = battery::one_way(1, 2, 3, 1, 0.5, Vector{{1.0, 1.0}});
  const auto r = classify_dynamics(sys);
  const bool verdict = r.spectral.bound > 0 && !r.a1prime && r.persistent_block == std::vector<Eigen::Index>{1};
  const auto s = tail_stats(integrate_dde(sys, HistorySpec::constant(Vector::Ones(2)), 300.0, default_step(sys), 10));
  const bool sim = s.tail_max(0) < 1e-3 && s.tail_min(1) > 1e-2;
  return {verdict && sim, fmt("s=%.3f, c found=%d, block size=%zu, patch1 tail_max=%.2e, patch2 tail_min=%.3f",
                              r.spectral.bound, int(r.a1prime.has_value()), r.persistent_block.size(),
                              s.tail_max(0), s.tail_min(1))};
}

Outcome dissipativity() {
  const auto sys = battery::two_patch_migration();
  const Vector bound = dissipativity_bound(sys);
  Matrix dma = -sys.a;
  dma.diagonal() += sys.d;
  const Vector solved = linear_solve(dma, sys.birth_totals() * std::exp(-1.0));
  const Vector closed{{std::exp(-1.0), 2.0 * std::exp(-1.0)}};
  const double err = std::max((bound - closed).lpNorm<Eigen::Infinity>(), (bound - solved).lpNorm<Eigen::Infinity>());

  double worst = 0.0;
  for (const auto& c : battery::simulation_battery()) {
    const auto s = tail_stats(integrate_dde(c.sys, HistorySpec::constant(Vector::Ones(c.sys.n())), 500.0,
                                            default_step(c.sys), 10));
    worst = std::max(worst, (s.tail_max.array() / dissipativity_bound(c.sys).array()).maxCoeff());
  }
  return {err <= 1e-12 && worst <= 1.02,
          fmt("two-patch bound error=%.2e, battery max tail/bound=%.4f", err, worst)};
}

Outcome gamma_range_containment() {
  const auto sys = battery::gamma_range_system();
  const double lower = std::min(1.2, std::exp(1.2 + 1.5 - 1.0 - std::exp(0.5)));
  const double upper = std::exp(0.5);
  const auto s = tail_stats(integrate_dde(sys, HistorySpec::constant(Vector::Ones(3)), 500.0, default_step(sys), 10));
  const bool ok = s.tail_min.minCoeff() >= 0.98 * lower && s.tail_max.maxCoeff() <= 1.02 * upper;
  return {ok, fmt("tails [%.4f, %.4f] within [%.4f, %.4f] -/+ 2%%", s.tail_min.minCoeff(), s.tail_max.maxCoeff(),
                  lower, upper)};
}

Outcome recurrence_limit() {
  std::mt19937_64 rng(20240703);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 1 + k % 5;
    const Vector gammas = Vector::NullaryExpr(n, [&] { return std::exp(0.05 + 2.95 * u(rng)); });
    const Vector cs = Vector::NullaryExpr(n, [&] { return 0.2 + 4.8 * u(rng); });
    double m_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      m_max = std::min({m_max, std::log(gammas(j)) / cs(j), std::nextafter(1.0 / cs(j), 0.0)});
    auto valid = [&](double m) {
      return ((cs.array() * m).exp() <= gammas.array()).all() && ((cs.array() * m) < 1.0).all();
    };
    while (!valid(m_max)) m_max = std::nextafter(m_max, 0.0);
    // Even draws sit on the largest admissible m, odd draws strictly inside.
    const double m = k % 2 == 0 ? m_max : m_max * (0.3 + 0.7 * u(rng));
    const double s0 = m * (0.001 + 0.998 * u(rng));
    const auto seq = lemma21_sequence(gammas, cs, m, s0, 10000);
    bool monotone = true;
    for (std::size_t i = 1; i < seq.size(); ++i) monotone = monotone && seq[i] >= seq[i - 1];
    const double dev = std::abs(seq.back() - m);
    worst = std::max(worst, dev);
    if (!monotone || dev > 1e-8) ++failures;
  }
  return {failures == 0, fmt("100 parameterizations, failures=%d, max |s_10000 - m|=%.2e", failures, worst)};
}

Outcome equilibrium_certification() {
  std::mt19937_64 rng(20240705);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int systems = 0, failures = 0, second_roots = 0;
  double worst_flow = 0.0;
  for (const auto& c : battery::feasible_battery(50, 20240706)) {
    ++systems;
    const auto cert = solve_positive_equilibrium(c.sys);
    if (!cert) {
      ++failures;
      continue;
    }
    worst_flow = std::max(worst_flow, cert->flow_deviation);
    if (cert->flow_deviation > 1e-6 || !cert->neg_jacobian_is_nsM || cert->index != 1) ++failures;
    const Vector box = dissipativity_bound(c.sys);
    for (int k = 0; k < 20; ++k) {
      const Vector start = box.cwiseProduct(Vector::NullaryExpr(c.sys.n(), [&] { return 0.01 + 0.99 * u(rng); }));
      const auto r = damped_newton(c.sys, start);
      if (r.converged && r.x.minCoeff() > 1e-6 && (r.x - cert->x_star).lpNorm<Eigen::Infinity>() > 1e-8)
        ++second_roots;
    }
  }
  return {failures == 0 && second_roots == 0,
          fmt("%d systems, certificate failures=%d, max Newton/flow gap=%.2e, second roots=%d", systems, failures,
              worst_flow, second_roots)};
}

Outcome figure_reproduction() {
  const auto dir = std::filesystem::temp_directory_path() / "nicholson-acceptance";
  std::filesystem::remove_all(dir);
  const std::string cmd = std::string("\"") + NICHOLSON_CLI + "\" reproduce all --out-dir \"" + dir.string() +
                          "\" > \"" + (dir.string() + ".log") + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  const bool exit_ok = status == 0;

  auto patch2 = [&](const std::string& id) {
    std::ifstream in(dir / ("manifest-" + id + ".json"));
    if (!in) return std::string("missing");
    return nlohmann::json::parse(in)["observed_labels"][1].get<std::string>();
  };
  const std::string l3a = patch2("3a"), l3b = patch2("3b");
  return {exit_ok && l3a == "ConvergedToPositive" && l3b == "SustainedOscillation",
          fmt("reproduce all exit status=%d, 3a patch 2=%s, 3b patch 2=%s", status, l3a.c_str(), l3b.c_str())};
}

Outcome delay_robust_indicator() {
  const auto fig3 = battery::delay_unstable(3.5);
  const auto x3 = solve_positive_equilibrium(fig3);
  const auto two = battery::two_patch_migration();
  const auto x2 = solve_positive_equilibrium(two);
  if (!x3 || !x2) return {false, "equilibrium missing"};
  const auto r3 = delay_robustness(fig3, x3->x_star);
  const auto r2 = delay_robustness(two, x2->x_star);
  const bool ok = r3.diagonal_lambdas(1) < 0 && r2.verdict == DelayVerdict::RobustlyStable;
  return {ok, fmt("delay-unstable system lambda_2=%.6f (x*=(%.4f, %.4f)); two-patch N_hat nsM=%d",
                  r3.diagonal_lambdas(1), x3->x_star(0), x3->x_star(1),
                  int(r2.verdict == DelayVerdict::RobustlyStable))};
}

Outcome positivity_and_order() {
  std::mt19937_64 rng(20240707);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  double min_state = 0.0;
  int runs = 0;
  for (const auto& c : battery::simulation_battery()) {
    const auto n = c.sys.n();
    for (int k = 0; k < 3; ++k) {
      const Matrix values = Matrix::NullaryExpr(4, n, [&] { return k == 0 ? 1.0 : u(rng); });
      const auto h = HistorySpec::sampled(Vector{{-c.sys.tau_max() - 1.0, -1.0, -0.5, 0.0}}, values);
      min_state = std::min(min_state, integrate_dde(c.sys, h, 200.0, default_step(c.sys), 5).states.minCoeff());
      ++runs;
    }
  }

  const auto sys = battery::single_delay(Vector{{3.0, 2.0}}, (Matrix(2, 2) << 0, 1, 1, 0).finished(),
                                         Vector{{1.0, 3.0}}, Vector{{1.0, 2.0}});
  const auto history = HistorySpec::constant(Vector{{0.5, 1.5}});
  auto terminal = [&](double dt) {
    return Vector(integrate_dde(sys, history, 8.0, dt).states.bottomRows(1).transpose());
  };
  const Vector x1 = terminal(0.1), x2 = terminal(0.05), x3 = terminal(0.025);
  const double ratio = (x1 - x2).lpNorm<Eigen::Infinity>() / (x2 - x3).lpNorm<Eigen::Infinity>();
  return {min_state >= -1e-12 && std::abs(ratio - 16.0) <= 0.3 * 16.0,
          fmt("%d runs, min state=%.2e, step-halving error ratio=%.2f", runs, min_state, ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectral-bound", spectral_bound_criterion},
      {"threshold-sharpness", threshold_sharpness},
      {"reducible-counterexample", reducible_counterexample},
      {"dissipativity", dissipativity},
      {"gamma-range-containment", gamma_range_containment},
      {"recurrence-limit", recurrence_limit},
      {"equilibrium-certification", equilibrium_certification},
      {"figure-reproduction", figure_reproduction},
      {"delay-robust-indicator", delay_robust_indicator},
      {"positivity-and-rk4-order", positivity_and_order},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !out.pass;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
