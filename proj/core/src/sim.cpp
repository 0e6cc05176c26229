#include "asep/sim.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace asep {

long long LatticeState::particles() const {
  return std::accumulate(eta.begin(), eta.end(), 0LL);
}

BoundaryRates scaled_boundary_rates(const ModelParams& params, const Rates& rates) {
  if (params.theta_split) {
    const auto& s = *params.theta_split;
    return {rates.alpha * params.reservoir_scale(s.alpha),
            rates.gamma * params.reservoir_scale(s.gamma),
            rates.delta * params.reservoir_scale(s.delta),
            rates.beta * params.reservoir_scale(s.beta)};
  }
  const double scale = params.reservoir_scale(params.theta);
  return {rates.alpha * scale, rates.gamma * scale, rates.delta * scale, rates.beta * scale};
}

EventTable build_event_table(const LatticeState& state, const ModelParams& params,
                             const RateSchedule& schedule) {
  const int n = state.size();
  const double right = params.right_hop_rate();
  const double left = params.left_hop_rate();
  const auto b = scaled_boundary_rates(params, schedule.at(state.t));

  EventTable table;
  table.right.assign(n - 1, 0.0);
  table.left.assign(n - 1, 0.0);
  for (int bond = 1; bond < n; ++bond) {
    const int here = state[bond];
    const int next = state[bond + 1];
    if (here == 1 && next == 0) table.right[bond - 1] = right;
    if (here == 0 && next == 1) table.left[bond - 1] = left;
  }
  table.left_flip = state[1] == 0 ? b.inject_left : b.remove_left;
  table.right_flip = state[n] == 0 ? b.inject_right : b.remove_right;
  table.total = table.left_flip + table.right_flip;
  for (int i = 0; i < n - 1; ++i) table.total += table.right[i] + table.left[i];
  return table;
}

void for_each_transition(const Occupation& eta, const ModelParams& params, const Rates& rates,
                         const std::function<void(const Occupation&, double)>& visit) {
  const int n = static_cast<int>(eta.size());
  const double right = params.right_hop_rate();
  const double left = params.left_hop_rate();
  const auto b = scaled_boundary_rates(params, rates);

  Occupation next = eta;
  for (int i = 0; i + 1 < n; ++i) {
    if (eta[i] == eta[i + 1]) continue;
    std::swap(next[i], next[i + 1]);
    visit(next, eta[i] == 1 ? right : left);
    std::swap(next[i], next[i + 1]);
  }
  const double left_flip = eta[0] == 0 ? b.inject_left : b.remove_left;
  if (left_flip > 0.0) {
    next[0] ^= 1;
    visit(next, left_flip);
    next[0] ^= 1;
  }
  const double right_flip = eta[n - 1] == 0 ? b.inject_right : b.remove_right;
  if (right_flip > 0.0) {
    next[n - 1] ^= 1;
    visit(next, right_flip);
    next[n - 1] ^= 1;
  }
}

double apply_generator(const LatticeState& state, const ModelParams& params,
                       const RateSchedule& schedule,
                       const std::function<double(const Occupation&)>& f) {
  const double here = f(state.eta);
  double sum = 0.0;
  for_each_transition(state.eta, params, schedule.at(state.t),
                      [&](const Occupation& next, double rate) { sum += rate * (f(next) - here); });
  return sum;
}

// ---------------------------------------------------------------------------

Simulator::Simulator(ModelParams params, RateSchedule schedule, LatticeState initial, RngStream rng)
    : params_(params),
      schedule_(std::move(schedule)),
      state_(std::move(initial)),
      rng_(rng),
      tree_(std::size_t(state_.size()) + 1),
      right_rate_(params_.right_hop_rate()),
      left_rate_(params_.left_hop_rate()) {
  if (state_.size() != params_.n)
    throw ParameterError("simulator: configuration length differs from n");
  for (auto v : state_.eta)
    if (v > 1) throw ParameterError("simulator: occupations must be 0 or 1");
  if (state_.t < 0.0) throw ParameterError("simulator: initial time must be >= 0");
  for (int bond = 1; bond < params_.n; ++bond) refresh_bond(bond);
  load_rates(state_.t);
}

void Simulator::refresh_bond(int bond) {
  const int here = state_.eta[bond - 1];
  const int next = state_.eta[bond];
  double rate = 0.0;
  if (here != next) rate = here == 1 ? right_rate_ : left_rate_;
  tree_.set(std::size_t(bond), rate);
}

void Simulator::refresh_left() {
  tree_.set(0, state_.eta.front() == 0 ? boundary_.inject_left : boundary_.remove_left);
}

void Simulator::refresh_right() {
  tree_.set(std::size_t(params_.n),
            state_.eta.back() == 0 ? boundary_.inject_right : boundary_.remove_right);
}

void Simulator::load_rates(double t) {
  boundary_ = scaled_boundary_rates(params_, schedule_.at(t));
  refresh_left();
  refresh_right();
}

EventTable Simulator::event_table() const {
  const int n = params_.n;
  EventTable table;
  table.right.assign(n - 1, 0.0);
  table.left.assign(n - 1, 0.0);
  for (int bond = 1; bond < n; ++bond) {
    const double rate = tree_.leaf(std::size_t(bond));
    (state_.eta[bond - 1] == 1 ? table.right : table.left)[bond - 1] = rate;
  }
  table.left_flip = tree_.leaf(0);
  table.right_flip = tree_.leaf(std::size_t(n));
  table.total = tree_.total();
  return table;
}

StepResult Simulator::step(double horizon) {
  StepResult result;
  const double t0 = state_.t;
  if (horizon <= t0) return result;

  const auto breakpoint = schedule_.next_breakpoint(t0);
  const bool stop_at_breakpoint = breakpoint && *breakpoint <= horizon;
  const double limit = stop_at_breakpoint ? *breakpoint : horizon;
  const double total = tree_.total();

  auto truncate = [&] {
    if (!std::isfinite(limit))
      throw std::runtime_error("simulator: absorbing state with no horizon or breakpoint");
    state_.t = limit;
    result.waiting_time = limit - t0;
    if (stop_at_breakpoint) load_rates(limit);
    return result;
  };

  if (!(total > 0.0)) return truncate();
  const double tau = rng_.exponential(total);
  if (t0 + tau >= limit) return truncate();

  state_.t = t0 + tau;
  result.waiting_time = tau;
  ++events_;

  const int n = params_.n;
  const auto leaf = static_cast<int>(tree_.select(rng_.uniform() * total));
  if (leaf == 0) {
    auto& site = state_.eta.front();
    if (site == 1) {
      result.kind = EventKind::remove_left;
      ++flux_.removed_left;
    } else {
      result.kind = EventKind::inject_left;
      ++flux_.injected_left;
    }
    site ^= 1;
    result.site = 1;
    refresh_left();
    refresh_bond(1);
  } else if (leaf == n) {
    auto& site = state_.eta.back();
    if (site == 1) {
      result.kind = EventKind::remove_right;
      ++flux_.removed_right;
    } else {
      result.kind = EventKind::inject_right;
      ++flux_.injected_right;
    }
    site ^= 1;
    result.site = n;
    refresh_right();
    refresh_bond(n - 1);
  } else {
    const int bond = leaf;
    result.kind = state_.eta[bond - 1] == 1 ? EventKind::hop_right : EventKind::hop_left;
    result.site = bond;
    std::swap(state_.eta[bond - 1], state_.eta[bond]);
    if (bond > 1) refresh_bond(bond - 1);
    refresh_bond(bond);
    if (bond + 1 < n) refresh_bond(bond + 1);
    if (bond == 1) refresh_left();
    if (bond + 1 == n) refresh_right();
  }
  return result;
}

// ---------------------------------------------------------------------------

Trajectory simulate(const ModelParams& params, const RateSchedule& schedule,
                    const LatticeState& initial, double T, std::span<const double> observe_at,
                    RngStream& rng, std::uint64_t event_budget) {
  params.validate(ParamCheck::relaxed);
  if (!std::is_sorted(observe_at.begin(), observe_at.end()))
    throw ParameterError("simulate: observation times must be sorted");
  for (double t : observe_at)
    if (t < initial.t || t > T) throw ParameterError("simulate: observation time outside [t0, T]");

  Simulator sim(params, schedule, initial, rng);
  Trajectory out;
  for (double t_obs : observe_at) {
    while (sim.state().t < t_obs) {
      if (sim.events() >= event_budget) {
        out.truncated = true;
        break;
      }
      sim.step(t_obs);
    }
    if (out.truncated) break;
    out.snapshots.push_back({t_obs, sim.state().eta, sim.flux()});
  }
  out.events = sim.events();
  rng = sim.rng();
  return out;
}

LatticeState sample_initial(const Profile& v0, int n, RngStream& rng) {
  if (n < 2) throw ParameterError("sample_initial: n must be >= 2");
  LatticeState state;
  state.eta.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double rho = v0(double(i) / n);
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("sample_initial: v0 outside [0, 1]");
    state.eta[i - 1] = rng.bernoulli(rho) ? 1 : 0;
  }
  return state;
}

double bar_eta(const LatticeState& state, int i, int k) {
  if (k < 1 || i < k || i > state.size()) throw std::out_of_range("bar_eta: need 1 <= k <= i <= n");
  int sum = 0;
  for (int j = i - k + 1; j <= i; ++j) sum += state[j];
  return double(sum) / k;
}

double hat_eta(const LatticeState& state, int i, int k) {
  if (k < 1 || i < k || i > state.size() - k + 1)
    throw std::out_of_range("hat_eta: need k <= i <= n - k + 1");
  long long weighted = 0;
  for (int d = -k + 1; d <= k - 1; ++d) weighted += (k - std::abs(d)) * state[i - d];
  return double(weighted) / (double(k) * k);
}

double micro_current(const LatticeState& state, const ModelParams& params,
                     const RateSchedule& schedule, int i) {
  const int n = state.size();
  if (i < 0 || i > n) throw std::out_of_range("micro_current: need 0 <= i <= n");
  const auto b = scaled_boundary_rates(params, schedule.at(state.t));
  if (i == 0) return b.inject_left * (1 - state[1]) - b.remove_left * state[1];
  if (i == n) return b.remove_right * state[n] - b.inject_right * (1 - state[n]);
  const int here = state[i];
  const int next = state[i + 1];
  return params.p * n * here * (1 - next) + params.left_hop_rate() * (here - next);
}

// ---------------------------------------------------------------------------

namespace {

/// Weighted window sums over a 1-based integer sequence via double prefix sums.
class BlockSums {
 public:
  explicit BlockSums(std::span<const int> values) : size_(int(values.size())) {
    single_.assign(size_ + 1, 0);
    double_.assign(size_ + 1, 0);
    for (int i = 1; i <= size_; ++i) {
      single_[i] = single_[i - 1] + values[i - 1];
      double_[i] = double_[i - 1] + single_[i];
    }
  }

  /// sum of values[j] for lo <= j <= hi (1-based).
  long long window(int lo, int hi) const { return single_[hi] - single_[lo - 1]; }

  /// k^2 times the hat average at i: sum_{i'=0}^{k-1} window(i+i'-k+1, i+i').
  long long hat(int i, int k) const {
    return (D(i + k - 1) - D(i - 1)) - (D(i - 1) - D(i - k - 1));
  }

 private:
  long long D(int m) const { return m < 0 ? 0 : double_[m]; }

  int size_;
  std::vector<long long> single_;
  std::vector<long long> double_;
};

}  // namespace

DensityField coarse_density(std::span<const Snapshot> snapshots, int k) {
  if (snapshots.empty()) throw ParameterError("coarse_density: no snapshots");
  const int n = static_cast<int>(snapshots.front().eta.size());
  if (k < 1 || 2 * k > n + 1) throw ParameterError("coarse_density: block length too large");

  std::vector<double> times;
  for (const auto& s : snapshots) times.push_back(s.t);
  DensityField field(std::move(times), n);

  std::vector<int> values(n);
  const double k2 = double(k) * k;
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    std::copy(snapshots[j].eta.begin(), snapshots[j].eta.end(), values.begin());
    const BlockSums sums(values);
    for (int i = 1; i <= n; ++i) {
      double u;
      if (i < k)
        u = double(sums.window(i, i + k - 1)) / k;
      else if (i > n - k + 1)
        u = double(sums.window(i - k + 1, i)) / k;
      else
        u = double(sums.hat(i, k)) / k2;
      field.at(j, i - 1) = u;
    }
  }
  return field;
}

DensityField coarse_density(std::span<const Snapshot> snapshots, const ModelParams& params,
                            ParamCheck check) {
  ModelParams resolved = params;
  if (!snapshots.empty()) resolved.n = static_cast<int>(snapshots.front().eta.size());
  return coarse_density(snapshots, mesoscopic_k(resolved, check));
}

double local_equilibrium_gap(std::span<const Snapshot> snapshots, int k) {
  if (snapshots.empty()) throw ParameterError("local_equilibrium_gap: no snapshots");
  const int n = static_cast<int>(snapshots.front().eta.size());
  if (k < 1 || 2 * k > n) throw ParameterError("local_equilibrium_gap: block length too large");
  const double k2 = double(k) * k;
  double sum = 0.0;
  long long count = 0;
  std::vector<int> eta(n), pair(n);
  for (const auto& s : snapshots) {
    for (int i = 0; i < n; ++i) {
      eta[i] = s.eta[i];
      pair[i] = i + 1 < n ? s.eta[i] * (1 - s.eta[i + 1]) : 0;
    }
    const BlockSums density(eta), current(pair);
    for (int i = k; i <= n - k; ++i) {
      const double rho = double(density.hat(i, k)) / k2;
      const double f = double(current.hat(i, k)) / k2;
      sum += std::abs(f - rho * (1.0 - rho));
      ++count;
    }
  }
  return sum / double(count);
}

// ---------------------------------------------------------------------------

std::uint32_t encode(const Occupation& eta) {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < eta.size(); ++i)
    if (eta[i]) code |= 1u << i;
  return code;
}

Occupation decode(std::uint32_t code, int n) {
  Occupation eta(n);
  for (int i = 0; i < n; ++i) eta[i] = (code >> i) & 1u;
  return eta;
}

std::vector<double> exact_stationary(const ModelParams& params, const Rates& rates) {
  // The oracle also accepts p = 0 (purely symmetric bulk).
  ModelParams checked = params;
  if (checked.p == 0.0) checked.p = 1.0;
  checked.validate(ParamCheck::relaxed);
  const int n = params.n;
  if (n > 12) throw ParameterError("exact_stationary: n must be <= 12");
  const std::uint32_t states = 1u << n;

  std::vector<std::vector<std::uint32_t>> forward(states), backward(states);
  std::vector<Eigen::Triplet<double>> entries;  // entries of Q^T
  for (std::uint32_t s = 0; s < states; ++s) {
    double out = 0.0;
    for_each_transition(decode(s, n), params, rates, [&](const Occupation& next, double rate) {
      const auto target = encode(next);
      entries.emplace_back(int(target), int(s), rate);
      out += rate;
      forward[s].push_back(target);
      backward[target].push_back(s);
    });
    entries.emplace_back(int(s), int(s), -out);
  }

  auto reaches_all = [&](const std::vector<std::vector<std::uint32_t>>& adj) {
    std::vector<char> seen(states, 0);
    std::queue<std::uint32_t> todo;
    todo.push(0);
    seen[0] = 1;
    std::uint32_t count = 1;
    while (!todo.empty()) {
      const auto s = todo.front();
      todo.pop();
      for (auto t : adj[s])
        if (!seen[t]) {
          seen[t] = 1;
          ++count;
          todo.push(t);
        }
    }
    return count == states;
  };
  if (!reaches_all(forward) || !reaches_all(backward))
    throw std::domain_error("exact_stationary: chain is not irreducible");

  // Replace the last balance equation by the normalisation sum(pi) = 1.
  const int last = int(states) - 1;
  std::erase_if(entries, [last](const auto& e) { return e.row() == last; });
  for (int s = 0; s <= last; ++s) entries.emplace_back(last, s, 1.0);

  const auto size = static_cast<Eigen::Index>(states);
  Eigen::SparseMatrix<double> A(size, size);
  A.setFromTriplets(entries.begin(), entries.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("exact_stationary: factorisation failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs[last] = 1.0;
  const Eigen::VectorXd pi = lu.solve(rhs);

  std::vector<double> out(states);
  for (std::uint32_t s = 0; s < states; ++s) out[s] = std::max(0.0, pi[int(s)]);
  const double norm = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& v : out) v /= norm;
  return out;
}

std::vector<double> occupation_frequencies(const ModelParams& params, const Rates& rates,
                                           const LatticeState& initial, std::uint64_t min_events,
                                           RngStream& rng) {
  if (params.n > 20) throw ParameterError("occupation_frequencies: n must be <= 20");
  Simulator sim(params, RateSchedule(rates), initial, rng);
  const auto inf = std::numeric_limits<double>::infinity();
  const std::uint64_t burn_in = min_events / 100;
  while (sim.events() < burn_in) sim.step(inf);

  std::vector<double> hold(std::size_t(1) << params.n, 0.0);
  const std::uint64_t stop = burn_in + min_events;
  while (sim.events() < stop) {
    const auto code = encode(sim.state().eta);
    hold[code] += sim.step(inf).waiting_time;
  }
  const double total = std::accumulate(hold.begin(), hold.end(), 0.0);
  for (auto& h : hold) h /= total;
  rng = sim.rng();
  return hold;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace asep
