#include "asep/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "asep/io.hpp"

namespace asep {
namespace {

using ojson = nlohmann::ordered_json;

/// Runs task(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots; the first exception is rethrown.
template <class Task>
void parallel_for(int count, int workers, Task&& task) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  if (xs.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size() - 1;
  return {mean, std::sqrt(var / xs.size())};
}

bool strictly_decreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] < xs[i - 1])) return false;
  return true;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_double(xs[i]);
  return "[" + s + "]";
}

std::vector<double> sample_schedule(const ScalarSchedule& s, const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(s.at(t));
  return out;
}

/// Effective reservoir exponents (alpha, gamma, beta, delta).
std::array<double, 4> exponents(const ModelParams& params) {
  if (params.theta_split) {
    const auto& s = *params.theta_split;
    return {s.alpha, s.gamma, s.beta, s.delta};
  }
  return {params.theta, params.theta, params.theta, params.theta};
}

Grid entropy_grid(int cells, double p, double T, int frames, double cfl = 0.9) {
  Grid g{cells, cfl * godunov_stable_dt(1.0 / cells, p), T, frames};
  g.validate();
  return g;
}

ojson field_summary(const DensityField& field) {
  return ojson{{"cells", field.cells()}, {"frames", field.frames()}};
}

}  // namespace

ojson to_json(const std::vector<Assertion>& assertions) {
  ojson out = ojson::array();
  for (const auto& a : assertions)
    out.push_back(ojson{{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  return out;
}

bool all_passed(const std::vector<Assertion>& assertions) {
  return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
}

Scenario parse_scenario(const std::string& text) {
  if (text == "thm-fast") return Scenario::thm_fast;
  if (text == "thm-slow-1") return Scenario::thm_slow_1;
  if (text == "thm-slow-2") return Scenario::thm_slow_2;
  if (text == "conjecture-critical") return Scenario::conjecture_critical;
  throw ParameterError("unknown scenario '" + text +
                       "' (thm-fast | thm-slow-1 | thm-slow-2 | conjecture-critical)");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::thm_fast:
      return "thm-fast";
    case Scenario::thm_slow_1:
      return "thm-slow-1";
    case Scenario::thm_slow_2:
      return "thm-slow-2";
    case Scenario::conjecture_critical:
      return "conjecture-critical";
  }
  return "thm-slow-1";
}

void check_scenario(Scenario scenario, const ModelParams& params, const RateSchedule& schedule,
                    ParamCheck check) {
  params.validate(check);
  const auto theta = exponents(params);
  const auto all = [&](auto pred) { return std::all_of(theta.begin(), theta.end(), pred); };
  const std::string name = to_string(scenario);
  switch (scenario) {
    case Scenario::thm_fast: {
      if (!all([](double t) { return t > 0.0; }))
        throw ParameterError(name + ": requires theta > 0");
      for (const auto& r : schedule.values())
        if (!(std::min({r.alpha, r.beta, r.gamma, r.delta}) > 0.0))
          throw ParameterError(name + ": requires essinf of alpha, beta, gamma, delta > 0");
      if (check == ParamCheck::strict && !(params.kappa > 5.0 / 7.0 && params.kappa < 1.0))
        throw ParameterError(name + ": requires kappa in (5/7, 1)");
      break;
    }
    case Scenario::thm_slow_1:
      if (!all([](double t) { return t < 0.0; }))
        throw ParameterError(name + ": requires theta < 0");
      break;
    case Scenario::thm_slow_2:
      if (!all([](double t) { return t == 0.0; }))
        throw ParameterError(name + ": requires theta = 0");
      for (const auto& r : schedule.values())
        if (r.alpha != 0.0 || r.beta != 0.0)
          throw ParameterError(name + ": requires alpha = beta = 0 in every schedule interval");
      break;
    case Scenario::conjecture_critical:
      if (!all([](double t) { return t == 0.0; }))
        throw ParameterError(name + ": requires theta = 0");
      break;
  }
}

BoundaryData limit_boundary_data(Scenario scenario, const Profile& v0,
                                 const RateSchedule& schedule, double p) {
  BoundaryLaw law = BoundaryLaw::closed;
  if (scenario == Scenario::thm_fast) law = BoundaryLaw::fast;
  if (scenario == Scenario::conjecture_critical) law = BoundaryLaw::viscous_limit;
  auto [minus, plus] = boundary_schedules(schedule, law, p);
  return BoundaryData{v0, std::move(minus), std::move(plus)};
}

std::uint64_t replica_stream(int n, int replica) {
  return (std::uint64_t(std::uint32_t(n)) << 32) | std::uint32_t(replica);
}

// ---------------------------------------------------------------------------

ConvergeReport run_converge(const ConvergeOptions& options) {
  if (options.n_list.empty()) throw ParameterError("converge: n_list is empty");
  if (!std::is_sorted(options.n_list.begin(), options.n_list.end()) ||
      std::adjacent_find(options.n_list.begin(), options.n_list.end()) != options.n_list.end())
    throw ParameterError("converge: n_list must be strictly increasing");
  if (options.replicas < 1) throw ParameterError("converge: replicas must be >= 1");
  if (!(options.T > 0.0) || options.frames < 1) throw ParameterError("converge: need T > 0, frames >= 1");

  ConvergeReport report;
  report.options = options;
  const auto times = uniform_times(options.T, options.frames);
  const double t_min = 0.05 * options.T;
  bool truncated = false;

  for (int n : options.n_list) {
    ModelParams params = options.model;
    params.n = n;
    check_scenario(options.scenario, params, options.schedule, options.check);
    const int k = mesoscopic_k(params, options.check);

    LevelResult level;
    level.n = n;
    level.k = k;
    const auto bd = limit_boundary_data(options.scenario, options.v0, options.schedule, params.p);
    level.reference = solve_entropy(bd, params.p, entropy_grid(n, params.p, options.T, options.frames)).field;
    const double strip = options.eps_strip.value_or(default_strip_width(1.0 / n));

    std::vector<ReplicaResult> results(options.replicas);
    parallel_for(options.replicas, options.workers, [&](int r) {
      RngStream rng(options.seed, replica_stream(n, r));
      const auto initial = sample_initial(options.v0, n, rng);
      const auto traj = simulate(params, options.schedule, initial, options.T, times, rng,
                                 options.event_budget);
      ReplicaResult& out = results[r];
      out.replica = r;
      out.events = traj.events;
      out.truncated = traj.truncated;
      out.flux = traj.snapshots.back().flux;
      out.density_start = double(initial.particles()) / n;
      const auto& last = traj.snapshots.back().eta;
      out.density_end = double(std::count(last.begin(), last.end(), 1)) / n;
      for (double eps : options.flux_eps)
        out.flux_diagnostic.push_back(boundary_flux_diagnostic(traj.snapshots, eps));
      const auto coarse = coarse_density(traj.snapshots, k);
      out.l1 = space_time_l1(coarse, level.reference, t_min, k, n - k - 1);
      if (!traj.truncated) out.traces = estimate_traces(coarse, strip);
    });

    std::vector<double> l1s, drifts;
    std::vector<TraceEstimate> traces;
    for (const auto& r : results) {
      l1s.push_back(r.l1);
      drifts.push_back(std::abs(r.density_end - r.density_start));
      if (r.truncated)
        truncated = true;
      else
        traces.push_back(r.traces);
    }
    std::tie(level.mean_l1, level.stderr_l1) = mean_stderr(l1s);
    std::tie(level.mean_density_drift, level.stderr_density_drift) = mean_stderr(drifts);
    for (std::size_t e = 0; e < options.flux_eps.size(); ++e) {
      std::vector<double> xs;
      for (const auto& r : results) xs.push_back(r.flux_diagnostic[e]);
      const auto [m, se] = mean_stderr(xs);
      level.flux_diagnostic_mean.push_back(m);
      level.flux_diagnostic_stderr.push_back(se);
    }
    if (!traces.empty()) {
      level.traces = average_traces(traces);
      level.trace_check = check_traces(level.traces, sample_schedule(bd.v_minus, level.traces.t),
                                       sample_schedule(bd.v_plus, level.traces.t), 1.0 / n);
    }
    level.replicas = std::move(results);
    report.levels.push_back(std::move(level));
  }

  report.assertions.push_back(
      {"event_budget", !truncated, truncated ? "a replica exhausted its event budget" : "ok"});
  if (options.scenario != Scenario::conjecture_critical) {
    std::vector<double> errors;
    for (const auto& l : report.levels) errors.push_back(l.mean_l1);
    report.assertions.push_back(
        {"l1_decreasing_in_n", strictly_decreasing(errors), "mean L1 per n: " + join(errors)});
  }
  return report;
}

ojson ConvergeReport::to_json() const {
  ojson j;
  j["scenario"] = to_string(options.scenario);
  j["n_list"] = options.n_list;
  j["replicas"] = options.replicas;
  j["T"] = options.T;
  j["frames"] = options.frames;
  j["seed"] = options.seed;
  ojson levels_json = ojson::array();
  for (const auto& l : levels) {
    ojson lj;
    lj["n"] = l.n;
    lj["k"] = l.k;
    lj["mean_l1"] = l.mean_l1;
    lj["stderr_l1"] = l.stderr_l1;
    lj["mean_density_drift"] = l.mean_density_drift;
    lj["stderr_density_drift"] = l.stderr_density_drift;
    lj["flux_eps"] = options.flux_eps;
    lj["flux_diagnostic_mean"] = l.flux_diagnostic_mean;
    lj["flux_diagnostic_stderr"] = l.flux_diagnostic_stderr;
    lj["trace_pass_fraction"] = l.trace_check.pass_fraction;
    ojson reps = ojson::array();
    for (const auto& r : l.replicas)
      reps.push_back(ojson{{"replica", r.replica},
                           {"l1", r.l1},
                           {"density_start", r.density_start},
                           {"density_end", r.density_end},
                           {"flux", asep::to_json(r.flux)},
                           {"flux_diagnostic", r.flux_diagnostic},
                           {"events", r.events},
                           {"truncated", r.truncated}});
    lj["replicas"] = reps;
    levels_json.push_back(lj);
  }
  j["levels"] = levels_json;
  j["assertions"] = asep::to_json(assertions);
  return j;
}

// ---------------------------------------------------------------------------

std::vector<double> ViscousSweepReport::distances(Regime regime) const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.regime == regime) out.push_back(r.l1);
  return out;
}

ViscousSweepReport run_viscous_sweep(const ViscousSweepOptions& options) {
  if (options.eps_list.empty()) throw ParameterError("viscous-sweep: eps_list is empty");
  for (std::size_t i = 0; i < options.eps_list.size(); ++i) {
    if (!(options.eps_list[i] > 0.0)) throw ParameterError("viscous-sweep: epsilon must be > 0");
    if (i && !(options.eps_list[i] < options.eps_list[i - 1]))
      throw ParameterError("viscous-sweep: eps_list must be strictly decreasing");
  }
  if (options.cells < 2) throw ParameterError("viscous-sweep: cells must be >= 2");
  const double dx = 1.0 / options.cells;
  const double eps_min = options.eps_list.back();
  if (dx > eps_min / 4.0)
    throw ParameterError("viscous-sweep: grid cannot resolve epsilon " + format_double(eps_min) +
                         " (need dx <= eps/4)");

  ViscousSweepReport report;
  report.options = options;
  report.critical_limit = boundary_values_viscous_limit(options.p, options.rates);
  report.liggett = liggett_check(options.p, options.sigma, options.rates);

  for (Regime regime : {Regime::critical, Regime::slow}) {
    const auto [vm, vp] = regime == Regime::critical ? report.critical_limit
                                                     : std::pair<double, double>{0.0, 1.0};
    const BoundaryData bd{options.v0, ScalarSchedule(vm), ScalarSchedule(vp)};
    const auto reference =
        solve_entropy(bd, options.p, entropy_grid(options.cells, options.p, options.T, options.frames, options.cfl))
            .field;
    for (double eps : options.eps_list) {
      const ViscousProblem problem{options.v0, options.rates, eps, regime};
      const Grid grid{options.cells, options.cfl * viscous_stable_dt(problem, options.p, dx), options.T,
                      options.frames};
      const auto field = solve_viscous(problem, options.p, grid);
      report.rows.push_back({regime, eps, space_time_l1(field, reference)});
    }
  }

  for (Regime regime : {Regime::critical, Regime::slow}) {
    const auto d = report.distances(regime);
    report.assertions.push_back({to_string(regime) + "_l1_decreasing_in_eps", strictly_decreasing(d),
                                 "L1 per eps: " + join(d)});
  }
  return report;
}

ojson ViscousSweepReport::to_json() const {
  ojson j;
  j["eps_list"] = options.eps_list;
  j["cells"] = options.cells;
  j["T"] = options.T;
  j["v0"] = options.v0.describe();
  j["critical_limit"] = {critical_limit.first, critical_limit.second};
  j["liggett_holds"] = liggett.holds;
  if (liggett.values) j["liggett_values"] = {liggett.values->first, liggett.values->second};
  ojson rows_json = ojson::array();
  for (const auto& r : rows)
    rows_json.push_back(ojson{{"regime", to_string(r.regime)}, {"epsilon", r.epsilon}, {"l1", r.l1}});
  j["rows"] = rows_json;
  j["assertions"] = asep::to_json(assertions);
  return j;
}

// ---------------------------------------------------------------------------

StationaryReport run_stationary(const StationaryOptions& options) {
  const auto& params = options.model;
  params.validate(options.check);
  const auto theta = exponents(params);
  const bool slow1 = std::all_of(theta.begin(), theta.end(), [](double t) { return t < 0.0; });
  const bool slow2 = std::all_of(theta.begin(), theta.end(), [](double t) { return t == 0.0; }) &&
                     options.rates.alpha == 0.0 && options.rates.beta == 0.0;
  if (!slow1 && !slow2)
    throw ParameterError("stationary: requires theta < 0, or theta = 0 with alpha = beta = 0");
  if (!(options.mass >= 0.0 && options.mass <= 1.0))
    throw ParameterError("stationary: mass must be in [0, 1]");

  StationaryReport report;
  report.options = options;
  report.horizon = options.T.value_or(options.mass > 0.0 ? 8.0 / options.mass : 8.0);
  if (!(report.horizon > 0.0)) throw ParameterError("stationary: horizon must be > 0");

  const RateSchedule schedule(options.rates);
  RngStream rng(options.seed, 0);
  const auto initial = sample_initial(Profile::constant(options.mass), params.n, rng);
  const auto times = uniform_times(report.horizon, options.frames);
  const auto traj = simulate(params, schedule, initial, report.horizon, times, rng, options.event_budget);
  report.events = traj.events;
  report.truncated = traj.truncated;

  const int k = mesoscopic_k(params, options.check);
  const std::span<const Snapshot> last(&traj.snapshots.back(), 1);
  report.terminal = coarse_density(last, k);
  DensityField target({report.terminal.times()}, params.n);
  const auto profile = stationary_profile(options.mass).discretize(params.n);
  std::copy(profile.begin(), profile.end(), target.frame(0).begin());
  report.terminal_l1 = frame_l1(report.terminal, 0, target, 0);

  report.assertions.push_back({"event_budget", !traj.truncated,
                               traj.truncated ? "event budget exhausted" : "ok"});
  if (params.n <= 10) {
    RngStream mc(options.seed, 1);
    const auto freq = occupation_frequencies(params, options.rates, initial, options.exact_events, mc);
    const auto exact = exact_stationary(params, options.rates);
    report.exact_tv = total_variation(freq, exact);
    report.assertions.push_back({"exact_tv_le_0.02", *report.exact_tv <= 0.02,
                                 "TV = " + format_double(*report.exact_tv)});
  }
  return report;
}

ojson StationaryReport::to_json() const {
  ojson j;
  j["n"] = options.model.n;
  j["mass"] = options.mass;
  j["horizon"] = horizon;
  j["terminal_l1"] = terminal_l1;
  j["target"] = stationary_profile(options.mass).describe();
  if (exact_tv) j["exact_tv"] = *exact_tv;
  j["events"] = events;
  j["truncated"] = truncated;
  j["assertions"] = asep::to_json(assertions);
  return j;
}

// ---------------------------------------------------------------------------

namespace {

ModelParams checked_model(const ExperimentConfig& c, ParamCheck check) {
  c.model.validate(check);
  return c.model;
}

BoundaryData configured_boundary(const ExperimentConfig& c) {
  if (c.boundary.v_minus && c.boundary.v_plus)
    return BoundaryData{c.initial, *c.boundary.v_minus, *c.boundary.v_plus};
  if (!c.experiment.scenario.empty())
    return limit_boundary_data(parse_scenario(c.experiment.scenario), c.initial, c.schedule, c.model.p);
  throw ConfigError("boundary.v_minus and boundary.v_plus (or experiment.scenario) are required");
}

Grid solver_grid(const ExperimentConfig& c, double stable_dt) {
  if (c.grid.cells < 2) throw ConfigError("grid.cells must be >= 2 for this experiment");
  Grid g{c.grid.cells, c.grid.dt.value_or(c.grid.cfl * stable_dt), c.grid.T, c.grid.frames};
  g.validate();
  return g;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
}

ojson run_simulate(const ExperimentConfig& c, const std::filesystem::path& out,
                   std::vector<Assertion>& assertions, ParamCheck check) {
  const auto params = checked_model(c, check);
  RngStream rng(c.seed, 0);
  const auto initial = sample_initial(c.initial, params.n, rng);
  const auto times = uniform_times(c.grid.T, c.grid.frames);
  const auto traj = simulate(params, c.schedule, initial, c.grid.T, times, rng,
                             c.experiment.event_budget);
  write_snapshots_csv(out / "snapshots.csv", traj.snapshots);
  write_flux_json(out / "flux.json", traj.snapshots);

  bool balanced = true;
  for (const auto& s : traj.snapshots) {
    const long long now = std::count(s.eta.begin(), s.eta.end(), 1);
    balanced = balanced && now - initial.particles() == s.flux.net();
  }
  assertions.push_back({"particle_balance", balanced, "sum(eta) - sum(eta_0) == injected - removed"});
  assertions.push_back({"event_budget", !traj.truncated, traj.truncated ? "event budget exhausted" : "ok"});

  ojson j{{"events", traj.events}, {"truncated", traj.truncated}, {"snapshots", traj.snapshots.size()}};
  const int k = mesoscopic_k(params, ParamCheck::relaxed);
  if (2 * k <= params.n + 1) {
    const auto coarse = coarse_density(traj.snapshots, k);
    write_density_csv(out / "density.csv", coarse);
    j["k"] = k;
    j["local_equilibrium_gap"] = 2 * k <= params.n ? local_equilibrium_gap(traj.snapshots, k) : 0.0;
  }
  j["final_flux"] = to_json(traj.snapshots.back().flux);
  return j;
}

ojson run_solve(const ExperimentConfig& c, const std::filesystem::path& out,
                std::vector<Assertion>& assertions) {
  const double p = c.model.p;
  if (c.solver.method == "entropy") {
    const auto bd = configured_boundary(c);
    const auto grid = solver_grid(c, godunov_stable_dt(1.0 / std::max(c.grid.cells, 1), p));
    const auto sol = solve_entropy(bd, p, grid);
    write_density_csv(out / "density.csv", sol.field);
    // discrete bookkeeping: mass(t) - mass(0) = inflow - outflow
    double worst = 0.0;
    for (std::size_t f = 0; f < sol.field.frames(); ++f) {
      const double expected = mass(sol.field, 0) + sol.inflow_left[f] - sol.outflow_right[f];
      worst = std::max(worst, std::abs(mass(sol.field, f) - expected));
    }
    assertions.push_back({"mass_bookkeeping", worst <= 1e-10, "max defect " + format_double(worst)});
    ojson masses = ojson::array();
    for (std::size_t f = 0; f < sol.field.frames(); ++f) masses.push_back(mass(sol.field, f));
    return ojson{{"method", "entropy"}, {"steps", sol.steps}, {"field", field_summary(sol.field)},
                 {"mass", masses}, {"inflow_left", sol.inflow_left}, {"outflow_right", sol.outflow_right}};
  }
  if (!c.schedule.is_constant())
    throw ParameterError("solve: regime/rate mismatch, viscous solver needs time-constant rates");
  const ViscousProblem problem{c.initial, c.schedule.values().front(), c.solver.epsilon, c.solver.regime};
  const auto grid = solver_grid(c, viscous_stable_dt(problem, p, 1.0 / std::max(c.grid.cells, 1)));
  const auto field = solve_viscous(problem, p, grid);
  write_density_csv(out / "density.csv", field);
  double lo = 1.0, hi = 0.0;
  for (std::size_t f = 0; f < field.frames(); ++f)
    for (double u : field.frame(f)) lo = std::min(lo, u), hi = std::max(hi, u);
  assertions.push_back({"bounded", lo >= -1e-9 && hi <= 1.0 + 1e-9,
                        "range [" + format_double(lo) + ", " + format_double(hi) + "]"});
  return ojson{{"method", "viscous"}, {"regime", to_string(c.solver.regime)},
               {"epsilon", c.solver.epsilon}, {"field", field_summary(field)}};
}

ojson run_traces(const ExperimentConfig& c, const std::filesystem::path& out,
                 std::vector<Assertion>& assertions, int workers, ParamCheck check) {
  DensityField field;
  TraceEstimate est;
  std::optional<BoundaryData> bd;
  if (c.experiment.source == "solve") {
    bd = configured_boundary(c);
    field = solve_entropy(*bd, c.model.p, solver_grid(c, godunov_stable_dt(1.0 / std::max(c.grid.cells, 1), c.model.p)))
                .field;
    est = estimate_traces(field, c.experiment.eps_strip.value_or(default_strip_width(field.dx())));
  } else {
    const auto params = checked_model(c, check);
    if (!c.experiment.scenario.empty())
      check_scenario(parse_scenario(c.experiment.scenario), params, c.schedule, check);
    if ((c.boundary.v_minus && c.boundary.v_plus) || !c.experiment.scenario.empty())
      bd = configured_boundary(c);
    if (c.experiment.replicas < 1) throw ParameterError("traces: replicas must be >= 1");
    // independent replicas; their spread enters the trace-set tolerance
    const auto times = uniform_times(c.grid.T, c.grid.frames);
    std::vector<DensityField> fields(c.experiment.replicas);
    std::vector<char> truncated(c.experiment.replicas, 0);
    parallel_for(c.experiment.replicas, workers, [&](int r) {
      RngStream rng(c.seed, replica_stream(params.n, r));
      const auto initial = sample_initial(c.initial, params.n, rng);
      const auto traj = simulate(params, c.schedule, initial, c.grid.T, times, rng, c.experiment.event_budget);
      truncated[r] = traj.truncated;
      fields[r] = coarse_density(traj.snapshots, params, check);
    });
    const bool any_truncated = std::any_of(truncated.begin(), truncated.end(), [](char t) { return t != 0; });
    assertions.push_back({"event_budget", !any_truncated, any_truncated ? "event budget exhausted" : "ok"});
    const double strip = c.experiment.eps_strip.value_or(default_strip_width(fields.front().dx()));
    std::vector<TraceEstimate> estimates;
    for (const auto& f : fields) estimates.push_back(estimate_traces(f, strip));
    est = average_traces(estimates);
    // replica-mean density for the CSV
    field = fields.front();
    for (std::size_t r = 1; r < fields.size(); ++r)
      for (std::size_t j = 0; j < field.frames(); ++j)
        for (int m = 0; m < field.cells(); ++m) field.at(j, m) += fields[r].at(j, m);
    for (std::size_t j = 0; j < field.frames(); ++j)
      for (double& u : field.frame(j)) u /= double(fields.size());
  }
  ojson j;
  if (bd) {
    const auto check_result = check_traces(est, sample_schedule(bd->v_minus, est.t),
                                           sample_schedule(bd->v_plus, est.t), field.dx());
    assertions.push_back({"trace_set_95", check_result.pass_fraction >= 0.95,
                          "pass fraction " + format_double(check_result.pass_fraction)});
    j = to_json(est, &check_result);
  } else {
    j = to_json(est);
  }
  write_text(out / "traces.json", j.dump(2) + "\n");
  write_density_csv(out / "density.csv", field);
  return j;
}

ojson run_liggett(const ExperimentConfig& c) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < c.schedule.values().size(); ++i) {
    const auto& r = c.schedule.values()[i];
    const auto res = liggett_check(c.model.p, c.model.sigma, r);
    const auto radical = boundary_values_viscous_limit(c.model.p, r);
    ojson row{{"from", c.schedule.breakpoints()[i]},
              {"holds", res.holds},
              {"radical_v_minus", radical.first},
              {"radical_v_plus", radical.second}};
    if (res.values) {
      row["v_minus"] = res.values->first;
      row["v_plus"] = res.values->second;
    }
    rows.push_back(row);
  }
  return ojson{{"intervals", rows}};
}

}  // namespace

ojson run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, int workers,
                     ParamCheck check) {
  std::filesystem::create_directories(out_dir);
  std::vector<Assertion> assertions;
  ojson results;
  const auto& kind = config.kind;
  const auto& e = config.experiment;

  if (kind == "simulate") {
    results = run_simulate(config, out_dir, assertions, check);
  } else if (kind == "solve") {
    results = run_solve(config, out_dir, assertions);
  } else if (kind == "traces") {
    results = run_traces(config, out_dir, assertions, workers, check);
  } else if (kind == "liggett") {
    results = run_liggett(config);
  } else if (kind == "viscous-sweep") {
    if (!config.schedule.is_constant())
      throw ParameterError("viscous-sweep: regime/rate mismatch, rates must be time-constant");
    ViscousSweepOptions o;
    o.eps_list = e.eps_list;
    o.rates = config.schedule.values().front();
    o.p = config.model.p;
    o.sigma = config.model.sigma;
    o.v0 = config.initial;
    o.cells = config.grid.cells > 0 ? config.grid.cells : 2000;
    o.T = config.grid.T;
    o.frames = config.grid.frames;
    o.cfl = config.grid.cfl;
    const auto report = run_viscous_sweep(o);
    std::string csv = "regime,epsilon,l1\n";
    for (const auto& r : report.rows)
      csv += to_string(r.regime) + "," + format_double(r.epsilon) + "," + format_double(r.l1) + "\n";
    write_text(out_dir / "sweep.csv", csv);
    results = report.to_json();
    assertions = report.assertions;
  } else if (kind == "converge") {
    if (e.scenario.empty()) throw ConfigError("converge: experiment.scenario is required");
    ConvergeOptions o;
    o.scenario = parse_scenario(e.scenario);
    o.model = config.model;
    o.schedule = config.schedule;
    o.v0 = config.initial;
    o.n_list = e.n_list;
    o.replicas = e.replicas;
    o.T = e.horizon.value_or(config.grid.T);
    o.frames = config.grid.frames;
    o.seed = config.seed;
    o.workers = workers;
    o.event_budget = e.event_budget;
    o.check = check;
    o.eps_strip = e.eps_strip;
    o.flux_eps = e.flux_eps;
    const auto report = run_converge(o);
    std::string csv = "n,k,mean_l1,stderr_l1,mean_density_drift,stderr_density_drift,trace_pass_fraction\n";
    for (const auto& l : report.levels)
      csv += std::to_string(l.n) + "," + std::to_string(l.k) + "," + format_double(l.mean_l1) + "," +
             format_double(l.stderr_l1) + "," + format_double(l.mean_density_drift) + "," +
             format_double(l.stderr_density_drift) + "," + format_double(l.trace_check.pass_fraction) + "\n";
    write_text(out_dir / "levels.csv", csv);
    const auto& finest = report.levels.back();
    write_text(out_dir / "traces.json", to_json(finest.traces, &finest.trace_check).dump(2) + "\n");
    write_density_csv(out_dir / "reference.csv", finest.reference);
    results = report.to_json();
    assertions = report.assertions;
  } else if (kind == "stationary") {
    if (!config.schedule.is_constant())
      throw ParameterError("stationary: rates must be time-constant");
    StationaryOptions o;
    o.model = config.model;
    o.rates = config.schedule.values().front();
    o.mass = e.mass;
    o.T = e.horizon;
    o.frames = config.grid.frames;
    o.seed = config.seed;
    o.event_budget = e.event_budget;
    o.exact_events = e.exact_events;
    o.check = check;
    const auto report = run_stationary(o);
    write_density_csv(out_dir / "terminal.csv", report.terminal);
    results = report.to_json();
    assertions = report.assertions;
  } else {
    throw ConfigError("unknown experiment kind '" + kind + "'");
  }

  ojson report;
  report["kind"] = kind;
  report["seed"] = config.seed;
  report["config"] = to_json(config);
  report["results"] = results;
  report["assertions"] = to_json(assertions);
  report["passed"] = all_passed(assertions);
  write_json(out_dir / "report.json", report);
  return report;
}

}  // namespace asep
