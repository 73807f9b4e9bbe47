// nicholson: command-line front end.
//
//   nicholson validate SCENARIO
//   nicholson classify SCENARIO
//   nicholson simulate SCENARIO --out traj.csv [--t-end T] [--dt H] [--record-every K]
//   nicholson reproduce FIGURE|all --out-dir DIR
//   nicholson sweep-delay SCENARIO --patch I --delay-index K --from A --to B --steps S
//
// Exit codes: 0 ok, 1 invariant violation, 2 parse error, 3 numeric failure,
// 4 reproduced labels differ from the expected ones.

#include "nicholson/classifier.hpp"
#include "nicholson/dde.hpp"
#include "nicholson/report_json.hpp"
#include "nicholson/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

namespace {

using namespace nicholson;
using nlohmann::json;

enum Exit { kOk = 0, kInvariant = 1, kParse = 2, kNumeric = 3, kMismatch = 4 };

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

std::optional<Vector> equilibrium_or_none(const PatchSystem& sys) {
  const auto c = find_positive_c(sys.community_matrix());
  if (!c) return std::nullopt;
  const auto cert = solve_positive_equilibrium(sys);
  if (!cert) return std::nullopt;
  return cert->x_star;
}

int cmd_validate(const std::string& path) {
  const auto scenario = load_scenario(path);
  const auto report = validate_system(scenario.system);
  print_json(to_json(report));
  return report.ok ? kOk : kInvariant;
}

int cmd_classify(const std::string& path) {
  const auto scenario = load_scenario(path);
  print_json(to_json(classify_dynamics(scenario.system)));
  return kOk;
}

struct SimulateOptions {
  std::string out;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<long> record_every;
};

int cmd_simulate(const std::string& path, const SimulateOptions& opt) {
  auto scenario = load_scenario(path);
  require_valid(scenario.system);
  if (opt.t_end) scenario.t_end = *opt.t_end;
  if (opt.dt) scenario.dt = *opt.dt;
  if (opt.record_every) scenario.record_every = *opt.record_every;

  const auto traj = integrate_dde(scenario.system, scenario.history, scenario.t_end, scenario.step(),
                                  scenario.record_every);
  std::ofstream csv(opt.out);
  if (!csv) throw std::runtime_error("cannot write '" + opt.out + "'");
  write_csv(csv, traj);

  const auto stats = tail_stats(traj);
  const auto x_star = equilibrium_or_none(scenario.system);
  print_json({{"csv", opt.out},
              {"step", traj.step},
              {"tail", to_json(stats)},
              {"x_star", x_star ? to_json(*x_star) : json(nullptr)},
              {"labels", to_json(classify_tail(stats, x_star))}});
  return kOk;
}

json classification_summary(const ClassificationReport& r) {
  return {{"spectral_bound", r.spectral.bound},
          {"irreducible", r.irreducible},
          {"verdict_zero", to_string(r.verdict_zero)},
          {"total_population", to_string(r.total_population)},
          {"per_patch", to_string(r.per_patch)},
          {"persistent_block", [&] {
             json out = json::array();
             for (auto i : r.persistent_block) out.push_back(i + 1);
             return out;
           }()},
          {"a1prime", r.a1prime.has_value()},
          {"x_star", r.equilibrium ? to_json(r.equilibrium->x_star) : json(nullptr)},
          {"delay_verdict", r.delay_robustness ? json(to_string(r.delay_robustness->verdict)) : json(nullptr)},
          {"gas_certificate", to_string(r.gas_certificate)}};
}

bool reproduce_one(const std::string& id, const std::filesystem::path& dir) {
  const auto preset = figure_preset(id);
  const auto& s = preset.scenario;
  const auto report = classify_dynamics(s.system);
  const auto traj = integrate_dde(s.system, s.history, s.t_end, s.step(), s.record_every);

  const std::string csv_name = "figure-" + id + ".csv";
  std::ofstream csv(dir / csv_name);
  if (!csv) throw std::runtime_error("cannot write " + (dir / csv_name).string());
  write_csv(csv, traj);

  const auto stats = tail_stats(traj);
  std::optional<Vector> x_star;
  if (report.equilibrium) x_star = report.equilibrium->x_star;
  const auto observed = classify_tail(stats, x_star);
  const bool match = labels_match(preset, observed);

  json expected = json::array();
  for (const auto& accepted : preset.expected) expected.push_back(to_json(accepted));
  const json manifest = {{"figure", id},
                         {"caption", preset.caption},
                         {"csv", csv_name},
                         {"scenario", scenario_to_json(s)},
                         {"classification", classification_summary(report)},
                         {"tail", to_json(stats)},
                         {"observed_labels", to_json(observed)},
                         {"expected_labels", expected},
                         {"match", match}};
  std::ofstream out(dir / ("manifest-" + id + ".json"));
  out << manifest.dump(2) << '\n';

  std::cout << "figure " << id << ": " << (match ? "match" : "MISMATCH");
  for (auto label : observed) std::cout << ' ' << to_string(label);
  std::cout << '\n';
  return match;
}

int cmd_reproduce(const std::string& which, const std::string& out_dir) {
  std::vector<std::string> ids;
  if (which == "all") {
    ids = figure_ids();
  } else if (std::find(figure_ids().begin(), figure_ids().end(), which) != figure_ids().end()) {
    ids = {which};
  } else {
    std::cerr << "unknown figure id '" << which << "'\n";
    return kParse;
  }
  std::filesystem::create_directories(out_dir);
  bool all_match = true;
  for (const auto& id : ids) all_match = reproduce_one(id, out_dir) && all_match;
  return all_match ? kOk : kMismatch;
}

struct SweepOptions {
  long patch = 1;
  long delay_index = 1;
  double from = 0.0;
  double to = 0.0;
  long steps = 1;
  std::optional<double> t_end;
  std::string out;
  unsigned jobs = 0;
};

struct SweepRow {
  double tau = 0.0;
  TailLabel label = TailLabel::Undetermined;
  double amplitude = 0.0;
};

int cmd_sweep_delay(const std::string& path, const SweepOptions& opt) {
  auto scenario = load_scenario(path);
  require_valid(scenario.system);
  const auto n = scenario.system.n();
  if (opt.patch < 1 || opt.patch > n || opt.delay_index < 1 || opt.delay_index > scenario.system.m())
    throw PreconditionError("sweep-delay: --patch or --delay-index out of range");
  if (opt.steps < 1) throw PreconditionError("sweep-delay: --steps must be at least 1");
  if (opt.t_end) scenario.t_end = *opt.t_end;

  const auto i = static_cast<Eigen::Index>(opt.patch - 1);
  const auto k = static_cast<Eigen::Index>(opt.delay_index - 1);
  const long points = opt.from == opt.to ? 1 : opt.steps;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (long p = 0; p < points; ++p)
    grid[static_cast<std::size_t>(p)] =
        points == 1 ? opt.from : opt.from + (opt.to - opt.from) * static_cast<double>(p) / (points - 1);

  // The equilibrium does not depend on the delays.
  const auto x_star = equilibrium_or_none(scenario.system);

  auto run = [&](double tau) {
    PatchSystem sys = scenario.system;
    sys.tau(i, k) = tau;
    require_valid(sys);
    const double dt = scenario.dt ? *scenario.dt : default_step(sys);
    const auto traj = integrate_dde(sys, scenario.history, scenario.t_end, dt, scenario.record_every);
    const auto stats = tail_stats(traj);
    return SweepRow{tau, classify_tail(stats, x_star)[static_cast<std::size_t>(i)], stats.relative_amplitude(i)};
  };

  const unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t start = 0; start < grid.size(); start += jobs) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t p = start; p < std::min(grid.size(), start + jobs); ++p)
      batch.push_back(std::async(std::launch::async, run, grid[p]));
    for (std::size_t b = 0; b < batch.size(); ++b) rows[start + b] = batch[b].get();
  }

  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) throw std::runtime_error("cannot write '" + opt.out + "'");
  }
  std::ostream& out = opt.out.empty() ? std::cout : file;
  out << "tau,label,amplitude\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.tau);
    out << buf << ',' << to_string(row.label) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.amplitude);
    out << buf << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis and simulation of multi-patch Nicholson blowflies systems"};
  app.require_subcommand(1);

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check a scenario and print the validation report");
  validate->add_option("scenario", path, "Scenario JSON file")->required();

  auto* classify = app.add_subcommand("classify", "Print the full classification report");
  classify->add_option("scenario", path, "Scenario JSON file")->required();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the delay system and write a CSV");
  simulate->add_option("scenario", path, "Scenario JSON file")->required();
  simulate->add_option("--out", sim.out, "Trajectory CSV path")->required();
  simulate->add_option("--t-end", sim.t_end, "Final time (overrides the scenario)");
  simulate->add_option("--dt", sim.dt, "Step size (overrides the scenario)");
  simulate->add_option("--record-every", sim.record_every, "Keep every k-th node")->check(CLI::PositiveNumber);

  std::string figure;
  std::string out_dir = "reproduction";
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in figure preset");
  reproduce->add_option("figure", figure, "1a, 1b, 2a, 2b, 3a, 3b or all")->required();
  reproduce->add_option("--out-dir", out_dir, "Directory for CSVs and manifests");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep-delay", "Simulate over a grid of one delay");
  sweep_cmd->add_option("scenario", path, "Scenario JSON file")->required();
  sweep_cmd->add_option("--patch", sweep.patch, "Patch index (1-based)")->required();
  sweep_cmd->add_option("--delay-index", sweep.delay_index, "Delay index k (1-based)")->default_val(1);
  sweep_cmd->add_option("--from", sweep.from, "First delay value")->required();
  sweep_cmd->add_option("--to", sweep.to, "Last delay value")->required();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points")->default_val(9);
  sweep_cmd->add_option("--t-end", sweep.t_end, "Final time (overrides the scenario)");
  sweep_cmd->add_option("--out", sweep.out, "CSV path (stdout when omitted)");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Parallel simulations (0 = hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*validate) return cmd_validate(path);
    if (*classify) return cmd_classify(path);
    if (*simulate) return cmd_simulate(path, sim);
    if (*reproduce) return cmd_reproduce(figure, out_dir);
    if (*sweep_cmd) return cmd_sweep_delay(path, sweep);
  } catch (const ScenarioError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvariant;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
