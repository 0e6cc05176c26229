#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asep/config.hpp"
#include "asep/pde.hpp"
#include "asep/sim.hpp"
#include "asep/traces.hpp"

namespace asep {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

nlohmann::ordered_json to_json(const std::vector<Assertion>& assertions);
bool all_passed(const std::vector<Assertion>& assertions);

/// Hydrodynamic regimes with a known (or conjectured) limit equation.
enum class Scenario {
  thm_fast,             // theta > 0, inf of rates > 0: v_- = a/(a+g), v_+ = d/(b+d)
  thm_slow_1,           // theta < 0: v_- = 0, v_+ = 1
  thm_slow_2,           // theta = 0, alpha = beta = 0: v_- = 0, v_+ = 1
  conjecture_critical,  // theta = 0: radical boundary values, recorded only
};

Scenario parse_scenario(const std::string& text);
std::string to_string(Scenario scenario);

/// Rejects parameter/schedule combinations outside the scenario's hypotheses.
/// Relaxed mode skips the kappa windows but never the rate/theta guards.
void check_scenario(Scenario scenario, const ModelParams& params, const RateSchedule& schedule,
                    ParamCheck check = ParamCheck::strict);

/// Dirichlet data of the limiting entropy problem for a scenario.
BoundaryData limit_boundary_data(Scenario scenario, const Profile& v0,
                                 const RateSchedule& schedule, double p);

/// Stream id for replica r at lattice size n.
std::uint64_t replica_stream(int n, int replica);

struct ConvergeOptions {
  Scenario scenario = Scenario::thm_slow_1;
  ModelParams model;  // n is overwritten per level
  RateSchedule schedule;
  Profile v0 = Profile::step(0.5);
  std::vector<int> n_list;
  int replicas = 8;
  double T = 1.0;
  int frames = 20;
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t event_budget = default_event_budget;
  ParamCheck check = ParamCheck::strict;
  std::optional<double> eps_strip;
  std::vector<double> flux_eps{0.05, 0.025};
};

struct ReplicaResult {
  int replica = 0;
  double l1 = 0.0;
  double density_start = 0.0;  // particles / n
  double density_end = 0.0;
  FluxCounters flux;
  std::vector<double> flux_diagnostic;  // per flux_eps
  std::uint64_t events = 0;
  bool truncated = false;
  TraceEstimate traces;
};

struct LevelResult {
  int n = 0;
  int k = 0;
  double mean_l1 = 0.0;
  double stderr_l1 = 0.0;
  double mean_density_drift = 0.0;  // mean |density_end - density_start|
  double stderr_density_drift = 0.0;
  std::vector<double> flux_diagnostic_mean;
  std::vector<double> flux_diagnostic_stderr;
  TraceEstimate traces;  // replica average
  TraceCheck trace_check;
  std::vector<ReplicaResult> replicas;
  DensityField reference;
};

struct ConvergeReport {
  ConvergeOptions options;
  std::vector<LevelResult> levels;
  std::vector<Assertion> assertions;

  nlohmann::ordered_json to_json() const;
};

/// For each n: simulate the replicas, coarse-grain, and compare to the
/// entropy solution with the scenario's boundary data on the sites
/// k+1..n-k and frames t >= 0.05 T. thm-* scenarios assert that the mean
/// error decreases along n_list; conjecture-critical only records.
ConvergeReport run_converge(const ConvergeOptions& options);

struct ViscousSweepOptions {
  std::vector<double> eps_list;
  Rates rates;
  double p = 1.0;
  double sigma = 1.0;
  Profile v0 = Profile::sine(0.3);
  int cells = 2000;
  double T = 1.0;
  int frames = 20;
  double cfl = 0.9;
};

struct SweepRow {
  Regime regime = Regime::critical;
  double epsilon = 0.0;
  double l1 = 0.0;
};

struct ViscousSweepReport {
  ViscousSweepOptions options;
  std::pair<double, double> critical_limit;  // radical boundary values
  LiggettResult liggett;
  std::vector<SweepRow> rows;
  std::vector<Assertion> assertions;

  std::vector<double> distances(Regime regime) const;
  nlohmann::ordered_json to_json() const;
};

/// L1 distances between viscous solutions and the matching entropy solution
/// (critical regime vs radical boundary data, slow regime vs v_- = 0, v_+ = 1).
/// Refuses grids with dx > eps/4 for the smallest eps.
ViscousSweepReport run_viscous_sweep(const ViscousSweepOptions& options);

struct StationaryOptions {
  ModelParams model;
  Rates rates;
  double mass = 0.5;
  std::optional<double> T;  // default 8 / mass
  int frames = 20;
  std::uint64_t seed = 1;
  std::uint64_t event_budget = default_event_budget;
  std::uint64_t exact_events = 2'000'000;
  ParamCheck check = ParamCheck::strict;
};

struct StationaryReport {
  StationaryOptions options;
  double horizon = 0.0;
  double terminal_l1 = 0.0;
  DensityField terminal;
  std::optional<double> exact_tv;  // n <= 10 only
  std::uint64_t events = 0;
  bool truncated = false;
  std::vector<Assertion> assertions;

  nlohmann::ordered_json to_json() const;
};

/// Long run from the product measure with density m; compares the terminal
/// coarse field to 1_{(1-m,1)} and, for n <= 10, Monte-Carlo occupation
/// frequencies to the exact stationary law.
StationaryReport run_stationary(const StationaryOptions& options);

/// Dispatches a parsed config, writes report.json and CSV outputs into
/// `out_dir`, and returns the report. report["passed"] is true iff every
/// asserted property holds.
nlohmann::ordered_json run_experiment(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir, int workers = 1,
                                      ParamCheck check = ParamCheck::strict);

}  // namespace asep
