#include "nicholson/bounds.hpp"

#include "nicholson/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nicholson {

Vector dissipativity_bound(const PatchSystem& sys) {
  return linear_solve(sys.decay_minus_migration(), sys.birth_totals()) * std::exp(-1.0);
}

std::optional<UniformBounds> theorem24_bounds(double alpha_lo, double beta_hi) {
  if (!(alpha_lo > 0 && alpha_lo < beta_hi && beta_hi > 1)) return std::nullopt;
  const double spread = std::exp(beta_hi - 1.0);
  return UniformBounds{std::min(alpha_lo, std::exp(alpha_lo + beta_hi - 1.0 - spread)), spread};
}

std::optional<GammaRange> gamma_exponent_range(const PatchSystem& sys) {
  GammaRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& gamma : gamma_coefficients(sys)) {
    if (!gamma || !(*gamma > 1.0)) return std::nullopt;
    range.alpha_lo = std::min(range.alpha_lo, std::log(*gamma));
    range.beta_hi = std::max(range.beta_hi, std::log(*gamma));
  }
  if (!(range.alpha_lo < range.beta_hi && range.beta_hi > 1.0)) return std::nullopt;
  return range;
}

std::vector<std::optional<double>> scaled_gamma_coefficients(const PatchSystem& sys, const Vector& c) {
  if (c.size() != sys.n()) throw PreconditionError("scaled_gamma_coefficients: dimension mismatch");
  const Vector births = sys.birth_totals().cwiseProduct(c);
  const Vector margin = sys.d.cwiseProduct(c) - sys.a * c;
  std::vector<std::optional<double>> out(static_cast<std::size_t>(sys.n()));
  for (Eigen::Index i = 0; i < sys.n(); ++i)
    if (margin(i) > 0) out[static_cast<std::size_t>(i)] = births(i) / margin(i);
  return out;
}

namespace {

double scaled_ricker(double x, double c) { return x * std::exp(-c * x); }

// log h(x) stays finite where h itself underflows (c x beyond ~745).
double log_scaled_ricker(double x, double c) { return std::log(x) - c * x; }

}  // namespace

bool satisfies_permanence_inequalities(const Vector& gammas, const Vector& c, double m_const,
                                       double L_const) {
  if (gammas.size() != c.size() || !(m_const > 0)) return false;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(c(i) * m_const < 1.0)) return false;
    if (!(log_scaled_ricker(m_const, c(i)) <= log_scaled_ricker(L_const, c(i)))) return false;
    if (!(std::exp(c(i) * m_const) <= gammas(i))) return false;
  }
  return true;
}

PermanenceConstants permanence_constants(const PatchSystem& sys, const Vector& c) {
  if (c.size() != sys.n() || !(c.array() > 0).all())
    throw PreconditionError("permanence_constants: c must be a positive vector of size n");
  const auto optional_gammas = scaled_gamma_coefficients(sys, c);
  Vector gammas(sys.n());
  for (Eigen::Index i = 0; i < sys.n(); ++i) {
    const auto& g = optional_gammas[static_cast<std::size_t>(i)];
    if (!g || !(*g > 1.0))
      throw PreconditionError("permanence_constants: scaled gamma coefficients must all exceed 1");
    gammas(i) = *g;
  }

  PermanenceConstants out;
  out.c = c;
  out.scaled_gammas = gammas;

  // In rescaled coordinates h_i peaks at 1/c_i with value 1/(c_i e), so every
  // limsup is at most max_i gamma_i / (c_i e). L must also exceed 1 and 1/c_i.
  const double strict_floor = std::max(1.0, c.cwiseInverse().maxCoeff());
  double L = (gammas.array() / c.array()).maxCoeff() * std::exp(-1.0);
  if (!(L > strict_floor)) L = strict_floor * (1.0 + 1e-6);
  out.L_const = L;

  // Largest m: h_i is increasing on [0, 1/c_i], so h_i(m) <= h_i(L) bisects.
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double target = log_scaled_ricker(L, c(i));
    double lo = 0.0;
    double hi = 1.0 / c(i);
    for (int it = 0; it < 2200 && hi - lo > 0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (log_scaled_ricker(mid, c(i)) <= target ? lo : hi) = mid;
    }
    m = std::min({m, lo, std::log(gammas(i)) / c(i)});
  }
  for (int step = 0; step < 1000 && m > 0 && !satisfies_permanence_inequalities(gammas, c, m, L); ++step)
    m = std::nextafter(m, 0.0);
  if (!satisfies_permanence_inequalities(gammas, c, m, L)) m = 0.0;
  if (!(m > 0)) throw NumericError("permanence_constants: no admissible m found");
  out.m_const = m;
  return out;
}

std::vector<double> lemma21_sequence(const Vector& gammas, const Vector& cs, double m_const,
                                     double s0, long k_max) {
  if (gammas.size() != cs.size() || gammas.size() == 0)
    throw PreconditionError("lemma21_sequence: dimension mismatch");
  if (!(s0 > 0 && s0 <= m_const)) throw PreconditionError("lemma21_sequence: need 0 < s0 <= m");
  if (k_max < 0) throw PreconditionError("lemma21_sequence: k_max must be non-negative");
  for (Eigen::Index j = 0; j < cs.size(); ++j)
    if (!(cs(j) > 0 && cs(j) * m_const < 1.0 && std::exp(cs(j) * m_const) <= gammas(j)))
      throw PreconditionError("lemma21_sequence: constants violate c_j m < 1 or exp(c_j m) <= gamma_j");

  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(k_max) + 1);
  s.push_back(s0);
  for (long k = 0; k < k_max; ++k) {
    double next = m_const;
    for (Eigen::Index j = 0; j < cs.size(); ++j)
      next = std::min(next, gammas(j) * scaled_ricker(s.back(), cs(j)));
    s.push_back(next);
  }
  return s;
}

std::string to_string(BoundSource source) {
  switch (source) {
    case BoundSource::Dissipativity: return "dissipativity";
    case BoundSource::GammaRange: return "gamma_range";
    case BoundSource::Permanence: return "permanence";
    case BoundSource::None: return "none";
  }
  return "none";
}

AsymptoticBounds asymptotic_bounds(const PatchSystem& sys, const std::optional<Vector>& c) {
  const auto n = sys.n();
  AsymptoticBounds out;
  out.dissipativity = dissipativity_bound(sys);
  out.upper = out.dissipativity;
  out.lower = Vector::Zero(n);
  out.upper_source.assign(static_cast<std::size_t>(n), BoundSource::Dissipativity);
  out.lower_source.assign(static_cast<std::size_t>(n), BoundSource::None);

  auto tighten = [&](const Vector& lower, const Vector& upper, BoundSource source) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (upper(i) < out.upper(i)) {
        out.upper(i) = upper(i);
        out.upper_source[ui] = source;
      }
      if (lower(i) > out.lower(i)) {
        out.lower(i) = lower(i);
        out.lower_source[ui] = source;
      }
    }
  };

  out.gamma_range = gamma_exponent_range(sys);
  if (out.gamma_range) {
    out.gamma_range_bounds = theorem24_bounds(out.gamma_range->alpha_lo, out.gamma_range->beta_hi);
    if (out.gamma_range_bounds)
      tighten(Vector::Constant(n, out.gamma_range_bounds->lower),
              Vector::Constant(n, out.gamma_range_bounds->upper), BoundSource::GammaRange);
  }

  if (c) {
    const auto gammas = scaled_gamma_coefficients(sys, *c);
    const bool admissible =
        std::all_of(gammas.begin(), gammas.end(), [](const auto& g) { return g && *g > 1.0; });
    if (admissible) {
      try {
        out.permanence = permanence_constants(sys, *c);
        tighten(out.permanence->lower(), out.permanence->upper(), BoundSource::Permanence);
      } catch (const NumericError&) {
        // m below the smallest double: the box is omitted.
      }
    }
  }
  return out;
}

}  // namespace nicholson
