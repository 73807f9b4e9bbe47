#pragma once

// Scenario files and the built-in figure presets.

#include "nicholson/dde.hpp"
#include "nicholson/model.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nicholson {

// Malformed scenario document (bad JSON, missing key, ragged array).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  PatchSystem system;
  HistorySpec history;   // defaults to phi == 1
  double t_end = 500.0;
  std::optional<double> dt;  // default_step(system) when empty
  long record_every = 1;

  double step() const { return dt ? *dt : default_step(system); }
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Reads and parses a scenario file; throws ScenarioError on any failure.
Scenario load_scenario(const std::string& path);

struct FigurePreset {
  std::string id;
  std::string caption;
  Scenario scenario;
  // Accepted tail labels for each patch.
  std::vector<std::vector<TailLabel>> expected;
};

const std::vector<std::string>& figure_ids();

/// Throws PreconditionError for an unknown id.
FigurePreset figure_preset(const std::string& id);

/// True when every observed label is among the accepted ones for its patch.
bool labels_match(const FigurePreset& preset, const std::vector<TailLabel>& observed);

}  // namespace nicholson
