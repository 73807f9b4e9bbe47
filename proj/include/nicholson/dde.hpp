#pragma once

// Fixed-step RK4 integration of the delay system with cubic Hermite dense
// output for delayed lookups, plus finite-horizon tail statistics.

#include "nicholson/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nicholson {

struct HistorySpec {
  enum class Kind { Constant, Sampled };

  Kind kind = Kind::Constant;
  Vector value;   // Constant
  Vector times;   // Sampled: increasing, first <= -tau_max, last == 0
  Matrix values;  // Sampled: one row per time

  static HistorySpec constant(Vector value);
  static HistorySpec sampled(Vector times, Matrix values);

  Eigen::Index dimension() const;
  // phi(t) for t <= 0; samples are joined linearly.
  Vector at(double t) const;
  double at(double t, Eigen::Index component) const;
  // Non-negative everywhere (C+).
  bool is_nonnegative() const;
  // C+ and strictly positive at t = 0 (C0+).
  bool is_strictly_positive_at_zero() const;
};

struct Trajectory {
  Vector times;
  Matrix states;       // one row per recorded node
  Matrix derivatives;  // right-hand side at each recorded node
  HistorySpec history;
  double step = 0.0;   // integration step

  Eigen::Index dimension() const { return states.cols(); }
  double t_end() const { return times.size() ? times(times.size() - 1) : 0.0; }
  // Dense output on [-tau_max, t_end]; exact at recorded nodes.
  Vector at(double t) const;
};

/// min(0.01, tau_min / 50)
double default_step(const PatchSystem& sys);

/// Integrates on [0, t_end] from `history`. Requires dt <= tau_min / 10.
/// Every `record_stride`-th node (and the final node) is kept in the result.
Trajectory integrate_dde(const PatchSystem& sys, const HistorySpec& history, double t_end, double dt,
                         long record_stride = 1);

/// Same scheme with every delay set to zero.
Trajectory integrate_ode(const PatchSystem& sys, const Vector& x0, double t_end, double dt,
                         long record_stride = 1);

struct TailStats {
  Vector tail_min;
  Vector tail_max;
  Vector tail_mean;
  Vector relative_amplitude;  // (max - min) / mean
  double t_start = 0.0;
  double t_end = 0.0;
};

inline constexpr double kDefaultTailWindow = 0.2;
inline constexpr double kConvergenceTolerance = 1e-3;
inline constexpr double kOscillationThreshold = 0.05;

TailStats tail_stats(const Trajectory& traj, double window_fraction = kDefaultTailWindow);

enum class TailLabel { ConvergedToZero, ConvergedToPositive, SustainedOscillation, Undetermined };

std::string to_string(TailLabel label);
std::optional<TailLabel> tail_label_from_string(const std::string& name);

std::vector<TailLabel> classify_tail(const TailStats& stats, const std::optional<Vector>& x_star,
                                     double tol = kConvergenceTolerance);
std::vector<TailLabel> classify_tail(const Trajectory& traj, const std::optional<Vector>& x_star,
                                     double tol = kConvergenceTolerance);

/// Header "t,x1,...,xn", one row per recorded node, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace nicholson
