#include "nicholson/dde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace nicholson {

HistorySpec HistorySpec::constant(Vector value) {
  HistorySpec h;
  h.kind = Kind::Constant;
  h.value = std::move(value);
  return h;
}

HistorySpec HistorySpec::sampled(Vector times, Matrix values) {
  if (times.size() < 1 || values.rows() != times.size())
    throw PreconditionError("HistorySpec::sampled: need one row of values per time");
  for (Eigen::Index k = 1; k < times.size(); ++k)
    if (!(times(k) > times(k - 1))) throw PreconditionError("HistorySpec::sampled: times must increase");
  if (times(times.size() - 1) != 0.0) throw PreconditionError("HistorySpec::sampled: last time must be 0");
  HistorySpec h;
  h.kind = Kind::Sampled;
  h.times = std::move(times);
  h.values = std::move(values);
  return h;
}

Eigen::Index HistorySpec::dimension() const {
  return kind == Kind::Constant ? value.size() : values.cols();
}

double HistorySpec::at(double t, Eigen::Index component) const {
  if (kind == Kind::Constant) return value(component);
  const auto last = times.size() - 1;
  if (t >= times(last)) return values(last, component);
  if (t <= times(0)) return values(0, component);
  const auto* begin = times.data();
  const auto k = static_cast<Eigen::Index>(std::upper_bound(begin, begin + times.size(), t) - begin);
  const double w = (t - times(k - 1)) / (times(k) - times(k - 1));
  return (1.0 - w) * values(k - 1, component) + w * values(k, component);
}

Vector HistorySpec::at(double t) const {
  Vector out(dimension());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = at(t, i);
  return out;
}

bool HistorySpec::is_nonnegative() const {
  return kind == Kind::Constant ? (value.array() >= 0).all() : (values.array() >= 0).all();
}

bool HistorySpec::is_strictly_positive_at_zero() const {
  return is_nonnegative() && (at(0.0).array() > 0).all();
}

namespace {

double hermite(double theta, double h, double x0, double f0, double x1, double f1) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  return (2 * t3 - 3 * t2 + 1) * x0 + (t3 - 2 * t2 + theta) * h * f0 + (-2 * t3 + 3 * t2) * x1 +
         (t3 - t2) * h * f1;
}

constexpr double kClampTolerance = 1e-12;

// Shared RK4 loop. `rhs(t, x, node)` evaluates the right-hand side; `node` is
// the index of the latest node whose state and derivative are stored.
template <typename Rhs, typename StoreNode>
Trajectory run_rk4(Eigen::Index n, const Vector& x0, double t_end, double dt, long record_stride,
                   Rhs&& rhs, StoreNode&& store_node) {
  if (!(t_end > 0)) throw PreconditionError("integrate: t_end must be positive");
  if (!(dt > 0)) throw PreconditionError("integrate: dt must be positive");
  if (record_stride < 1) throw PreconditionError("integrate: record_stride must be >= 1");
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.step = h;
  const long records = steps / record_stride + 2;
  traj.times.resize(records);
  traj.states.resize(records, n);
  traj.derivatives.resize(records, n);
  Eigen::Index recorded = 0;

  Vector x = x0;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    const Vector f = rhs(t, x, k - 1);
    store_node(k, x, f);
    if (k % record_stride == 0 || k == steps) {
      traj.times(recorded) = (k == steps) ? t_end : t;
      traj.states.row(recorded) = x.transpose();
      traj.derivatives.row(recorded) = f.transpose();
      ++recorded;
    }
    if (k == steps) break;

    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * f, k);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2, k);
    const Vector k4 = rhs(t + h, x + h * k3, k);
    x += h / 6.0 * (f + 2.0 * k2 + 2.0 * k3 + k4);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) >= 0) continue;
      if (x(i) > -kClampTolerance) {
        x(i) = 0.0;
      } else {
        char message[128];
        std::snprintf(message, sizeof message, "integrate: component %ld reached %.3g at t=%.6g",
                      static_cast<long>(i + 1), x(i), t + h);
        throw NumericError(message);
      }
    }
    if (!x.allFinite()) throw NumericError("integrate: non-finite state");
  }
  traj.times.conservativeResize(recorded);
  traj.states.conservativeResize(recorded, n);
  traj.derivatives.conservativeResize(recorded, n);
  return traj;
}

}  // namespace

double default_step(const PatchSystem& sys) { return std::min(0.01, sys.tau_min() / 50.0); }

Trajectory integrate_dde(const PatchSystem& sys, const HistorySpec& history, double t_end, double dt,
                         long record_stride) {
  require_valid(sys);
  const auto n = sys.n();
  const auto m = sys.m();
  if (history.dimension() != n) throw PreconditionError("integrate_dde: history dimension mismatch");
  if (!history.is_nonnegative()) throw PreconditionError("integrate_dde: history must be non-negative");
  if (history.kind == HistorySpec::Kind::Sampled && history.times(0) > -sys.tau_max())
    throw PreconditionError("integrate_dde: sampled history must cover [-tau_max, 0]");
  if (!(t_end > 0) || !(dt > 0)) throw PreconditionError("integrate_dde: t_end and dt must be positive");
  if (!(dt <= sys.tau_min() / 10.0 * (1.0 + 1e-12)))
    throw PreconditionError("integrate_dde: dt must not exceed tau_min / 10");

  const double h = t_end / std::ceil(t_end / dt - 1e-9);
  const auto capacity = static_cast<std::size_t>(std::ceil(sys.tau_max() / h)) + 4;
  std::vector<Vector> ring_x(capacity), ring_f(capacity);

  // Delayed value of component i at time s < t_node.
  auto lookup = [&](Eigen::Index i, double s, long newest) -> double {
    if (s <= 0.0) return history.at(s, i);
    const double position = s / h;
    auto j = static_cast<long>(std::floor(position));
    if (j >= newest) j = newest - 1;
    if (j < 0 || j + static_cast<long>(capacity) <= newest)
      throw NumericError("integrate_dde: delayed lookup outside stored history");
    const double theta = position - static_cast<double>(j);
    const auto a = static_cast<std::size_t>(j) % capacity;
    const auto b = static_cast<std::size_t>(j + 1) % capacity;
    const double value = hermite(theta, h, ring_x[a](i), ring_f[a](i), ring_x[b](i), ring_f[b](i));
    return std::max(0.0, value);
  };

  Matrix delayed(n, m);
  auto rhs = [&](double t, const Vector& x, long newest) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < m; ++k) delayed(i, k) = lookup(i, t - sys.tau(i, k), newest);
    return rhs_dde(sys, x, delayed);
  };
  auto store = [&](long k, const Vector& x, const Vector& f) {
    ring_x[static_cast<std::size_t>(k) % capacity] = x;
    ring_f[static_cast<std::size_t>(k) % capacity] = f;
  };

  auto traj = run_rk4(n, history.at(0.0), t_end, h, record_stride, rhs, store);
  traj.history = history;
  return traj;
}

Trajectory integrate_ode(const PatchSystem& sys, const Vector& x0, double t_end, double dt,
                         long record_stride) {
  require_valid(sys);
  if (x0.size() != sys.n()) throw PreconditionError("integrate_ode: dimension mismatch");
  if (!(x0.array() >= 0).all()) throw PreconditionError("integrate_ode: x0 must be non-negative");
  auto rhs = [&](double, const Vector& x, long) {
    return rhs_dde(sys, x, x.cwiseMax(0.0).replicate(1, sys.m()));
  };
  auto traj = run_rk4(sys.n(), x0, t_end, dt, record_stride, rhs, [](long, const Vector&, const Vector&) {});
  traj.history = HistorySpec::constant(x0);
  return traj;
}

Vector Trajectory::at(double t) const {
  if (times.size() == 0) throw PreconditionError("Trajectory::at: empty trajectory");
  if (t < 0.0) return history.at(t);
  if (t >= t_end()) return states.row(states.rows() - 1).transpose();
  const auto* begin = times.data();
  const auto k = static_cast<Eigen::Index>(std::upper_bound(begin, begin + times.size(), t) - begin);
  const double span = times(k) - times(k - 1);
  const double theta = (t - times(k - 1)) / span;
  Vector out(dimension());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out(i) = hermite(theta, span, states(k - 1, i), derivatives(k - 1, i), states(k, i), derivatives(k, i));
  return out;
}

TailStats tail_stats(const Trajectory& traj, double window_fraction) {
  if (!(window_fraction > 0 && window_fraction < 1))
    throw PreconditionError("tail_stats: window_fraction must lie in (0, 1)");
  TailStats stats;
  stats.t_end = traj.t_end();
  stats.t_start = stats.t_end * (1.0 - window_fraction);
  const auto* begin = traj.times.data();
  const auto first = static_cast<Eigen::Index>(
      std::lower_bound(begin, begin + traj.times.size(), stats.t_start) - begin);
  const auto count = traj.times.size() - first;
  if (count <= 0) throw PreconditionError("tail_stats: empty window");

  const auto window = traj.states.bottomRows(count);
  stats.tail_min = window.colwise().minCoeff().transpose();
  stats.tail_max = window.colwise().maxCoeff().transpose();
  stats.tail_mean = window.colwise().mean().transpose();
  // Keep min <= mean <= max despite summation rounding.
  stats.tail_mean = stats.tail_mean.cwiseMax(stats.tail_min).cwiseMin(stats.tail_max);
  stats.relative_amplitude.resize(traj.dimension());
  for (Eigen::Index i = 0; i < traj.dimension(); ++i) {
    const double spread = stats.tail_max(i) - stats.tail_min(i);
    stats.relative_amplitude(i) = spread == 0.0 ? 0.0 : spread / stats.tail_mean(i);
  }
  return stats;
}

std::string to_string(TailLabel label) {
  switch (label) {
    case TailLabel::ConvergedToZero: return "ConvergedToZero";
    case TailLabel::ConvergedToPositive: return "ConvergedToPositive";
    case TailLabel::SustainedOscillation: return "SustainedOscillation";
    case TailLabel::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

std::optional<TailLabel> tail_label_from_string(const std::string& name) {
  for (auto label : {TailLabel::ConvergedToZero, TailLabel::ConvergedToPositive,
                     TailLabel::SustainedOscillation, TailLabel::Undetermined})
    if (to_string(label) == name) return label;
  return std::nullopt;
}

std::vector<TailLabel> classify_tail(const TailStats& stats, const std::optional<Vector>& x_star,
                                     double tol) {
  const auto n = stats.tail_max.size();
  if (x_star && x_star->size() != n) throw PreconditionError("classify_tail: x_star dimension mismatch");
  std::vector<TailLabel> labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (stats.tail_max(i) < tol) {
      labels.push_back(TailLabel::ConvergedToZero);
    } else if (stats.relative_amplitude(i) < tol && stats.tail_mean(i) > tol &&
               (!x_star || std::abs(stats.tail_mean(i) - (*x_star)(i)) <= 0.01 * (*x_star)(i))) {
      labels.push_back(TailLabel::ConvergedToPositive);
    } else if (stats.relative_amplitude(i) >= kOscillationThreshold) {
      labels.push_back(TailLabel::SustainedOscillation);
    } else {
      labels.push_back(TailLabel::Undetermined);
    }
  }
  return labels;
}

std::vector<TailLabel> classify_tail(const Trajectory& traj, const std::optional<Vector>& x_star,
                                     double tol) {
  return classify_tail(tail_stats(traj), x_star, tol);
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (Eigen::Index i = 0; i < traj.dimension(); ++i) out << ",x" << i + 1;
  out << '\n';
  char buffer[32];
  for (Eigen::Index r = 0; r < traj.times.size(); ++r) {
    std::snprintf(buffer, sizeof buffer, "%.17g", traj.times(r));
    out << buffer;
    for (Eigen::Index i = 0; i < traj.dimension(); ++i) {
      std::snprintf(buffer, sizeof buffer, "%.17g", traj.states(r, i));
      out << ',' << buffer;
    }
    out << '\n';
  }
}

}  // namespace nicholson
