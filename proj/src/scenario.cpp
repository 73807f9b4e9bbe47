#include "nicholson/scenario.hpp"

#include "nicholson/report_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nicholson {

using nlohmann::json;

namespace {

const json& require_key(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ScenarioError(std::string("missing key '") + key + "'");
  return doc.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ScenarioError(where + ": expected a number");
  return v.get<double>();
}

Vector vector_of(const json& v, Eigen::Index size, const std::string& where) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != size)
    throw ScenarioError(where + ": expected an array of length " + std::to_string(size));
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i)
    out(i) = number(v[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  return out;
}

Matrix matrix_of(const json& v, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows)
    throw ScenarioError(where + ": expected " + std::to_string(rows) + " rows");
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    out.row(i) = vector_of(v[static_cast<std::size_t>(i)], cols, where + "[" + std::to_string(i) + "]")
                     .transpose();
  return out;
}

HistorySpec history_of(const json& v, Eigen::Index n) {
  const std::string kind = v.value("kind", std::string("constant"));
  try {
    if (kind == "constant") return HistorySpec::constant(vector_of(require_key(v, "value"), n, "history.value"));
    if (kind == "sampled") {
      const json& times = require_key(v, "times");
      if (!times.is_array() || times.empty()) throw ScenarioError("history.times: expected a non-empty array");
      const auto count = static_cast<Eigen::Index>(times.size());
      return HistorySpec::sampled(vector_of(times, count, "history.times"),
                                  matrix_of(require_key(v, "values"), count, n, "history.values"));
    }
  } catch (const PreconditionError& e) {
    throw ScenarioError(std::string("history: ") + e.what());
  }
  throw ScenarioError("history.kind must be 'constant' or 'sampled'");
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  const json& jn = require_key(doc, "n");
  const json& jm = require_key(doc, "m");
  if (!jn.is_number_integer() || !jm.is_number_integer() || jn.get<long>() < 1 || jm.get<long>() < 1)
    throw ScenarioError("n and m must be positive integers");
  const auto n = static_cast<Eigen::Index>(jn.get<long>());
  const auto m = static_cast<Eigen::Index>(jm.get<long>());

  Scenario s;
  s.name = doc.value("name", std::string("scenario"));
  s.system.d = vector_of(require_key(doc, "d"), n, "d");
  s.system.a = matrix_of(require_key(doc, "a"), n, n, "a");
  s.system.beta = matrix_of(require_key(doc, "beta"), n, m, "beta");
  s.system.tau = matrix_of(require_key(doc, "tau"), n, m, "tau");
  if (doc.contains("enforce_mortality_form")) {
    if (!doc["enforce_mortality_form"].is_boolean())
      throw ScenarioError("enforce_mortality_form: expected a boolean");
    s.system.enforce_mortality_form = doc["enforce_mortality_form"].get<bool>();
  }

  s.history = doc.contains("history") ? history_of(doc["history"], n) : HistorySpec::constant(Vector::Ones(n));
  if (doc.contains("t_end")) s.t_end = number(doc["t_end"], "t_end");
  if (doc.contains("dt")) s.dt = number(doc["dt"], "dt");
  if (doc.contains("record_every")) {
    if (!doc["record_every"].is_number_integer() || doc["record_every"].get<long>() < 1)
      throw ScenarioError("record_every must be a positive integer");
    s.record_every = doc["record_every"].get<long>();
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc = {{"name", s.name},
              {"n", s.system.n()},
              {"m", s.system.m()},
              {"d", to_json(s.system.d)},
              {"a", to_json(s.system.a)},
              {"beta", to_json(s.system.beta)},
              {"tau", to_json(s.system.tau)},
              {"enforce_mortality_form", s.system.enforce_mortality_form},
              {"t_end", s.t_end},
              {"record_every", s.record_every}};
  if (s.dt) doc["dt"] = *s.dt;
  if (s.history.kind == HistorySpec::Kind::Constant)
    doc["history"] = {{"kind", "constant"}, {"value", to_json(s.history.value)}};
  else
    doc["history"] = {{"kind", "sampled"}, {"times", to_json(s.history.times)}, {"values", to_json(s.history.values)}};
  return doc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return scenario_from_json(doc);
}

namespace {

PatchSystem single_delay_system(Vector d, Matrix a, Vector beta, Vector tau) {
  PatchSystem sys;
  sys.d = std::move(d);
  sys.a = std::move(a);
  sys.beta = std::move(beta);
  sys.tau = std::move(tau);
  return sys;
}

PatchSystem figure1_system(double a12) {
  Matrix a(2, 2);
  a << 0, a12, 1, 0;
  return single_delay_system(Vector{{3.0, 2.0}}, a, Vector{{1.0, 3.0}}, Vector{{5.0, 10.0}});
}

PatchSystem figure2_system(double weak) {
  Matrix a(3, 3);
  a << 0, weak, 1,
       1, 0, 1,
       weak, weak, 0;
  return single_delay_system(Vector{{2.0, 1.0, 3.0}}, a, Vector{{5.0, 10.0, 3.0}}, Vector{{3.0, 8.0, 6.0}});
}

PatchSystem figure3_system(double tau2) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  return single_delay_system(Vector{{2.0, 2.0}}, a, Vector{{3.0, 15.0}}, Vector{{1.0, tau2}});
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"1a", "1b", "2a", "2b", "3a", "3b"};
  return ids;
}

FigurePreset figure_preset(const std::string& id) {
  using L = TailLabel;
  const std::vector<L> zero{L::ConvergedToZero};
  const std::vector<L> positive{L::ConvergedToPositive};
  const std::vector<L> oscillation{L::SustainedOscillation};
  const std::vector<L> persists{L::ConvergedToPositive, L::SustainedOscillation, L::Undetermined};
  const std::vector<L> alive{L::ConvergedToPositive, L::SustainedOscillation};

  FigurePreset p;
  p.id = id;
  Scenario& s = p.scenario;
  s.name = "figure-" + id;
  s.t_end = 500.0;
  s.dt = 0.01;
  s.record_every = 10;

  if (id == "1a") {
    p.caption = "two patches, tau = (5, 10): persistence on both patches, positive equilibrium attracts";
    s.system = figure1_system(1.0);
    p.expected = {positive, positive};
  } else if (id == "1b") {
    p.caption = "as 1a with a12 = 0: extinction on the first patch";
    s.system = figure1_system(0.0);
    p.expected = {zero, alive};
  } else if (id == "2a") {
    p.caption = "three patches, reducible M with s(M) = 9: convergence, oscillation and extinction";
    s.system = figure2_system(0.0);
    // Patch 3 is critical (beta_3 = d_3) and decays only algebraically.
    s.t_end = 10000.0;
    s.record_every = 50;
    p.expected = {positive, oscillation, zero};
  } else if (id == "2b") {
    p.caption = "as 2a with a12 = a31 = a32 = 0.1: irreducible, persistent";
    s.system = figure2_system(0.1);
    p.expected = {persists, persists, persists};
  } else if (id == "3a") {
    p.caption = "tau = (1, 2): positive equilibrium attracts";
    s.system = figure3_system(2.0);
    p.expected = {positive, positive};
  } else if (id == "3b") {
    p.caption = "tau = (1, 3.5): periodic oscillation";
    s.system = figure3_system(3.5);
    p.expected = {persists, oscillation};
  } else {
    throw PreconditionError("unknown figure id '" + id + "'");
  }
  s.history = HistorySpec::constant(Vector::Ones(s.system.n()));
  return p;
}

bool labels_match(const FigurePreset& preset, const std::vector<TailLabel>& observed) {
  if (observed.size() != preset.expected.size()) return false;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const auto& accepted = preset.expected[i];
    if (std::find(accepted.begin(), accepted.end(), observed[i]) == accepted.end()) return false;
  }
  return true;
}

}  // namespace nicholson
