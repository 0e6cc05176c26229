#include "asep/config.hpp"

#include <algorithm>
#include <initializer_list>

namespace asep {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (j.contains(key) && !j.at(key).is_null()) out = get<T>(j, key, where);
}

Rates parse_rates(const json& j, const std::string& where) {
  check_keys(j, {"alpha", "beta", "gamma", "delta"}, where);
  Rates r;
  read(j, "alpha", r.alpha, where);
  read(j, "beta", r.beta, where);
  read(j, "gamma", r.gamma, where);
  read(j, "delta", r.delta, where);
  return r;
}

ojson rates_json(const Rates& r) {
  return ojson{{"alpha", r.alpha}, {"beta", r.beta}, {"gamma", r.gamma}, {"delta", r.delta}};
}

/// number | "constant:c" | "step:y" (0 before y, 1 from y on) |
/// {"breakpoints": [...], "values": [...]} | [v_0, ..., v_{K-1}] on K equal intervals of [0, T].
ScalarSchedule parse_boundary_datum(const json& j, double T, const std::string& where) {
  try {
    if (j.is_number()) return ScalarSchedule(j.get<double>());
    if (j.is_string()) {
      const auto text = j.get<std::string>();
      const auto colon = text.find(':');
      const auto head = text.substr(0, colon);
      if (colon == std::string::npos) throw ConfigError(where + ": malformed datum '" + text + "'");
      const double value = std::stod(text.substr(colon + 1));
      if (head == "constant") return ScalarSchedule(value);
      if (head == "step") {
        if (value <= 0.0) return ScalarSchedule(1.0);
        return ScalarSchedule({0.0, value}, {0.0, 1.0});
      }
      throw ConfigError(where + ": unknown datum form '" + text + "'");
    }
    if (j.is_array()) {
      const auto values = j.get<std::vector<double>>();
      if (values.empty()) throw ConfigError(where + ": empty sampled datum");
      std::vector<double> bps(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) bps[i] = T * i / values.size();
      return ScalarSchedule(bps, values);
    }
    check_keys(j, {"breakpoints", "values"}, where);
    return ScalarSchedule(get<std::vector<double>>(j, "breakpoints", where),
                          get<std::vector<double>>(j, "values", where));
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e) == nullptr) throw ConfigError(where + ": " + e.what());
    throw;
  }
}

ojson to_json(const ScalarSchedule& s) {
  if (s.is_constant()) return ojson(s.values().front());
  return ojson{{"breakpoints", s.breakpoints()}, {"values", s.values()}};
}

GridSpec parse_grid(const json& j) {
  const std::string where = "grid";
  check_keys(j, {"cells", "T", "frames", "dt", "cfl"}, where);
  GridSpec g;
  read(j, "cells", g.cells, where);
  read(j, "T", g.T, where);
  read(j, "frames", g.frames, where);
  read(j, "dt", g.dt, where);
  read(j, "cfl", g.cfl, where);
  if (g.cells < 0 || !(g.T > 0.0) || g.frames < 1 || !(g.cfl > 0.0 && g.cfl <= 1.0) ||
      (g.dt && !(*g.dt > 0.0)))
    throw ConfigError("grid: need cells >= 0, T > 0, frames >= 1, 0 < cfl <= 1, dt > 0");
  return g;
}

ojson to_json(const GridSpec& g) {
  ojson j{{"cells", g.cells}, {"T", g.T}, {"frames", g.frames}};
  if (g.dt) j["dt"] = *g.dt;
  j["cfl"] = g.cfl;
  return j;
}

SolverSpec parse_solver(const json& j) {
  const std::string where = "solver";
  check_keys(j, {"method", "regime", "epsilon"}, where);
  SolverSpec s;
  read(j, "method", s.method, where);
  if (s.method != "entropy" && s.method != "viscous")
    throw ConfigError("solver.method must be 'entropy' or 'viscous'");
  if (j.contains("regime")) s.regime = parse_regime(get<std::string>(j, "regime", where));
  read(j, "epsilon", s.epsilon, where);
  if (!(s.epsilon > 0.0)) throw ConfigError("solver.epsilon must be > 0");
  return s;
}

ExperimentSpec parse_experiment(const json& j) {
  const std::string where = "experiment";
  check_keys(j, {"scenario", "n_list", "replicas", "eps_list", "mass", "horizon", "eps_strip",
                 "flux_eps", "source", "event_budget", "exact_events"},
             where);
  ExperimentSpec e;
  read(j, "scenario", e.scenario, where);
  read(j, "n_list", e.n_list, where);
  read(j, "replicas", e.replicas, where);
  read(j, "eps_list", e.eps_list, where);
  read(j, "mass", e.mass, where);
  read(j, "horizon", e.horizon, where);
  read(j, "eps_strip", e.eps_strip, where);
  read(j, "flux_eps", e.flux_eps, where);
  read(j, "source", e.source, where);
  read(j, "event_budget", e.event_budget, where);
  read(j, "exact_events", e.exact_events, where);
  if (e.replicas < 1) throw ConfigError("experiment.replicas must be >= 1");
  if (e.source != "simulate" && e.source != "solve")
    throw ConfigError("experiment.source must be 'simulate' or 'solve'");
  return e;
}

ojson to_json(const ExperimentSpec& e) {
  ojson j;
  j["scenario"] = e.scenario;
  j["n_list"] = e.n_list;
  j["replicas"] = e.replicas;
  j["eps_list"] = e.eps_list;
  j["mass"] = e.mass;
  if (e.horizon) j["horizon"] = *e.horizon;
  if (e.eps_strip) j["eps_strip"] = *e.eps_strip;
  j["flux_eps"] = e.flux_eps;
  j["source"] = e.source;
  j["event_budget"] = e.event_budget;
  j["exact_events"] = e.exact_events;
  return j;
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::fast:
      return "fast";
    case Regime::critical:
      return "critical";
    case Regime::slow:
      return "slow";
  }
  return "critical";
}

Regime parse_regime(const std::string& text) {
  if (text == "fast") return Regime::fast;
  if (text == "critical") return Regime::critical;
  if (text == "slow") return Regime::slow;
  throw ConfigError("unknown regime '" + text + "' (fast | critical | slow)");
}

ModelParams parse_model(const json& j) {
  const std::string where = "model";
  check_keys(j, {"n", "p", "sigma", "kappa", "theta", "kappa_prime", "theta_split"}, where);
  ModelParams m;
  read(j, "n", m.n, where);
  read(j, "p", m.p, where);
  read(j, "sigma", m.sigma, where);
  read(j, "kappa", m.kappa, where);
  read(j, "theta", m.theta, where);
  read(j, "kappa_prime", m.kappa_prime, where);
  if (j.contains("theta_split")) {
    const auto& s = j.at("theta_split");
    check_keys(s, {"alpha", "gamma", "beta", "delta"}, "model.theta_split");
    ThetaSplit split;
    read(s, "alpha", split.alpha, where);
    read(s, "gamma", split.gamma, where);
    read(s, "beta", split.beta, where);
    read(s, "delta", split.delta, where);
    m.theta_split = split;
  }
  return m;
}

ojson to_json(const ModelParams& m) {
  ojson j{{"n", m.n}, {"p", m.p}, {"sigma", m.sigma}, {"kappa", m.kappa}, {"theta", m.theta}};
  if (m.kappa_prime) j["kappa_prime"] = *m.kappa_prime;
  if (m.theta_split) {
    const auto& s = *m.theta_split;
    j["theta_split"] = ojson{{"alpha", s.alpha}, {"gamma", s.gamma}, {"beta", s.beta}, {"delta", s.delta}};
  }
  return j;
}

RateSchedule parse_rate_schedule(const json& j) {
  const std::string where = "schedule";
  try {
    if (j.is_object() && (j.contains("breakpoints") || j.contains("values"))) {
      check_keys(j, {"breakpoints", "values"}, where);
      const auto& vals = j.at("values");
      if (!vals.is_array()) throw ConfigError("schedule.values must be an array");
      std::vector<Rates> rates;
      for (std::size_t i = 0; i < vals.size(); ++i)
        rates.push_back(parse_rates(vals[i], where + ".values[" + std::to_string(i) + "]"));
      return RateSchedule(get<std::vector<double>>(j, "breakpoints", where), rates);
    }
    return RateSchedule(parse_rates(j, where));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ojson to_json(const RateSchedule& s) {
  if (s.is_constant()) return rates_json(s.values().front());
  ojson values = ojson::array();
  for (const auto& r : s.values()) values.push_back(rates_json(r));
  return ojson{{"breakpoints", s.breakpoints()}, {"values", values}};
}

Profile parse_profile(const json& j) {
  try {
    if (j.is_number()) return Profile::constant(j.get<double>());
    if (j.is_string()) return Profile::parse(j.get<std::string>());
    if (j.is_array()) return Profile::sampled(j.get<std::vector<double>>());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
  throw ConfigError("initial: expected a number, a profile string or an array of samples");
}

json to_json(const Profile& profile) {
  if (const auto* s = std::get_if<Profile::Sampled>(&profile.variant())) return json(s->values);
  return json(profile.describe());
}

ExperimentConfig parse_config(const json& input) {
  const json& j = input.contains("config") ? input.at("config") : input;
  check_keys(j, {"kind", "model", "schedule", "grid", "seed", "initial", "boundary", "solver",
                 "experiment"},
             "config");
  ExperimentConfig c;
  c.kind = get<std::string>(j, "kind", "config");
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), c.kind) ==
      experiment_kinds().end())
    throw ConfigError("config.kind: unknown experiment kind '" + c.kind + "'");
  if (j.contains("model")) c.model = parse_model(j.at("model"));
  if (j.contains("schedule")) c.schedule = parse_rate_schedule(j.at("schedule"));
  if (j.contains("grid")) c.grid = parse_grid(j.at("grid"));
  read(j, "seed", c.seed, "config");
  if (j.contains("initial")) c.initial = parse_profile(j.at("initial"));
  if (j.contains("boundary")) {
    const auto& b = j.at("boundary");
    check_keys(b, {"v_minus", "v_plus"}, "boundary");
    if (b.contains("v_minus"))
      c.boundary.v_minus = parse_boundary_datum(b.at("v_minus"), c.grid.T, "boundary.v_minus");
    if (b.contains("v_plus"))
      c.boundary.v_plus = parse_boundary_datum(b.at("v_plus"), c.grid.T, "boundary.v_plus");
  }
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  if (j.contains("experiment")) c.experiment = parse_experiment(j.at("experiment"));
  return c;
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["kind"] = c.kind;
  j["model"] = to_json(c.model);
  j["schedule"] = to_json(c.schedule);
  j["grid"] = to_json(c.grid);
  j["seed"] = c.seed;
  j["initial"] = to_json(c.initial);
  ojson boundary = ojson::object();
  if (c.boundary.v_minus) boundary["v_minus"] = to_json(*c.boundary.v_minus);
  if (c.boundary.v_plus) boundary["v_plus"] = to_json(*c.boundary.v_plus);
  j["boundary"] = boundary;
  j["solver"] = ojson{{"method", c.solver.method},
                      {"regime", to_string(c.solver.regime)},
                      {"epsilon", c.solver.epsilon}};
  j["experiment"] = to_json(c.experiment);
  return j;
}

}  // namespace asep
