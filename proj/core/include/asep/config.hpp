#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asep/params.hpp"
#include "asep/pde.hpp"
#include "asep/profile.hpp"
#include "asep/schedule.hpp"
#include "asep/sim.hpp"

namespace asep {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid request. cells == 0 lets the experiment pick (n cells for particle
/// comparisons); a missing dt means cfl times the solver's stable step.
struct GridSpec {
  int cells = 0;
  double T = 1.0;
  int frames = 20;
  std::optional<double> dt;
  double cfl = 0.9;
};

struct SolverSpec {
  std::string method = "entropy";  // "entropy" | "viscous"
  Regime regime = Regime::critical;
  double epsilon = 0.01;
};

struct BoundarySpec {
  std::optional<ScalarSchedule> v_minus;
  std::optional<ScalarSchedule> v_plus;
};

struct ExperimentSpec {
  std::string scenario;
  std::vector<int> n_list;
  int replicas = 8;
  std::vector<double> eps_list;
  double mass = 0.5;
  std::optional<double> horizon;
  std::optional<double> eps_strip;
  std::vector<double> flux_eps{0.05, 0.025};
  std::string source = "simulate";  // traces: "simulate" | "solve"
  std::uint64_t event_budget = default_event_budget;
  std::uint64_t exact_events = 2'000'000;
};

/// Full experiment description. JSON keys: kind, model, schedule, grid, seed,
/// initial, boundary, solver, experiment. Unknown keys are rejected at every level.
struct ExperimentConfig {
  std::string kind;
  ModelParams model;
  RateSchedule schedule;
  GridSpec grid;
  std::uint64_t seed = 1;
  Profile initial = Profile::constant(0.0);
  BoundarySpec boundary;
  SolverSpec solver;
  ExperimentSpec experiment;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"simulate",  "solve",      "viscous-sweep", "converge",
                                              "stationary", "traces",    "liggett"};
  return kinds;
}

/// Accepts either a config object or a report containing one under "config".
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ExperimentConfig& config);

ModelParams parse_model(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ModelParams& params);
RateSchedule parse_rate_schedule(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RateSchedule& schedule);
Profile parse_profile(const nlohmann::json& j);
nlohmann::json to_json(const Profile& profile);

std::string to_string(Regime regime);
Regime parse_regime(const std::string& text);

}  // namespace asep
