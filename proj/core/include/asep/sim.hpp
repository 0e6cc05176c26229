#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "asep/grid.hpp"
#include "asep/params.hpp"
#include "asep/profile.hpp"
#include "asep/rate_tree.hpp"
#include "asep/rng.hpp"
#include "asep/schedule.hpp"

namespace asep {

using Occupation = std::vector<std::uint8_t>;

/// Configuration eta in {0,1}^n (site i stored at eta[i-1]) at macroscopic time t.
struct LatticeState {
  Occupation eta;
  double t = 0.0;

  int size() const { return static_cast<int>(eta.size()); }
  long long particles() const;
  /// 1-based occupation.
  int operator[](int site) const { return eta[site - 1]; }
};

/// Particles exchanged with each reservoir since t = 0.
struct FluxCounters {
  long long injected_left = 0;
  long long removed_left = 0;
  long long injected_right = 0;
  long long removed_right = 0;

  long long net() const { return injected_left - removed_left + injected_right - removed_right; }
  friend bool operator==(const FluxCounters&, const FluxCounters&) = default;
};

struct Snapshot {
  double t = 0.0;
  Occupation eta;
  FluxCounters flux;
};

/// Reservoir flip rates including the n^(1+theta) scale (or the per-rate
/// exponents of ModelParams::theta_split).
struct BoundaryRates {
  double inject_left = 0.0;
  double remove_left = 0.0;
  double inject_right = 0.0;
  double remove_right = 0.0;
};

BoundaryRates scaled_boundary_rates(const ModelParams& params, const Rates& rates);

/// All transition rates out of a configuration. Bond b (1..n-1) joins sites b and b+1.
struct EventTable {
  std::vector<double> right;  // right[b-1]: particle at b hops to b+1
  std::vector<double> left;   // left[b-1]: particle at b+1 hops to b
  double left_flip = 0.0;
  double right_flip = 0.0;
  double total = 0.0;
};

EventTable build_event_table(const LatticeState& state, const ModelParams& params,
                             const RateSchedule& schedule);

/// Calls visit(next_configuration, rate) for every transition with positive rate.
void for_each_transition(const Occupation& eta, const ModelParams& params, const Rates& rates,
                         const std::function<void(const Occupation&, double)>& visit);

/// L_{n,t} f at the given state, evaluated by enumerating transitions.
double apply_generator(const LatticeState& state, const ModelParams& params,
                       const RateSchedule& schedule,
                       const std::function<double(const Occupation&)>& f);

enum class EventKind {
  none,  // clock truncated at a breakpoint or horizon; nothing happened
  hop_right,
  hop_left,
  inject_left,
  remove_left,
  inject_right,
  remove_right,
};

struct StepResult {
  EventKind kind = EventKind::none;
  int site = 0;  // hops: left site of the bond; flips: 1 or n
  double waiting_time = 0.0;
};

/// Exact continuous-time simulation of the open exclusion process.
///
/// Transition rates live in a RateTree with leaf 0 the left reservoir,
/// leaves 1..n-1 the bonds and leaf n the right reservoir; each event touches
/// at most three leaves. Rates are refreshed whenever the clock reaches a
/// schedule breakpoint.
class Simulator {
 public:
  Simulator(ModelParams params, RateSchedule schedule, LatticeState initial, RngStream rng);

  /// Draws one exponential waiting time. If it would cross the next schedule
  /// breakpoint or `horizon`, the clock stops there and no event fires.
  StepResult step(double horizon);

  const LatticeState& state() const { return state_; }
  const FluxCounters& flux() const { return flux_; }
  std::uint64_t events() const { return events_; }
  double total_rate() const { return tree_.total(); }
  const RngStream& rng() const { return rng_; }

  /// Event table reconstructed from the tree leaves.
  EventTable event_table() const;

 private:
  void refresh_bond(int bond);
  void refresh_left();
  void refresh_right();
  void load_rates(double t);

  ModelParams params_;
  RateSchedule schedule_;
  LatticeState state_;
  RngStream rng_;
  RateTree tree_;
  BoundaryRates boundary_;
  double right_rate_;
  double left_rate_;
  FluxCounters flux_;
  std::uint64_t events_ = 0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::uint64_t events = 0;
  bool truncated = false;  // event budget exhausted before the last observation
};

inline constexpr std::uint64_t default_event_budget = 1'000'000'000ULL;

/// Runs the process from `initial` and records snapshots at the sorted
/// observation times in [initial.t, T]. On budget exhaustion the trajectory
/// is returned with the snapshots reached so far and `truncated` set.
Trajectory simulate(const ModelParams& params, const RateSchedule& schedule,
                    const LatticeState& initial, double T, std::span<const double> observe_at,
                    RngStream& rng, std::uint64_t event_budget = default_event_budget);

/// Independent Bernoulli(v0(i/n)) occupations.
LatticeState sample_initial(const Profile& v0, int n, RngStream& rng);

/// (1/k) sum_{i'=0}^{k-1} eta_{i-i'} for k <= i <= n.
double bar_eta(const LatticeState& state, int i, int k);

/// sum_{|i'|<k} (k-|i'|)/k^2 eta_{i-i'} for k <= i <= n-k+1.
double hat_eta(const LatticeState& state, int i, int k);

/// Microscopic current j_{i,i+1} for 0 <= i <= n. Reservoir currents use the
/// schedule at state.t; the bulk current is
/// p n eta_i (1 - eta_{i+1}) + sigma n^(1+kappa) (eta_i - eta_{i+1}).
double micro_current(const LatticeState& state, const ModelParams& params,
                     const RateSchedule& schedule, int i);

/// Block-averaged density field on n cells: hat_eta(i, k) in the bulk,
/// one-sided bar_eta windows within k of either end. k = mesoscopic_k(params).
DensityField coarse_density(std::span<const Snapshot> snapshots, const ModelParams& params,
                            ParamCheck check = ParamCheck::strict);

/// Same as above with an explicit block length.
DensityField coarse_density(std::span<const Snapshot> snapshots, int k);

/// Time-space average of |f_{i,k} - rho(1-rho)| with f = eta_i(1-eta_{i+1})
/// hat-averaged over the block and rho = hat_eta(i, k), over k <= i <= n-k.
double local_equilibrium_gap(std::span<const Snapshot> snapshots, int k);

/// Stationary distribution of the 2^n-state chain (n <= 12), indexed by the
/// configuration code sum_i eta_i 2^(i-1). Throws ParameterError for n > 12
/// and std::domain_error if the chain is not irreducible. p = 0 is accepted.
std::vector<double> exact_stationary(const ModelParams& params, const Rates& rates);

std::uint32_t encode(const Occupation& eta);
Occupation decode(std::uint32_t code, int n);

/// Time-weighted occupation frequencies of configurations over at least
/// `min_events` events (n <= 20), starting from `initial`.
std::vector<double> occupation_frequencies(const ModelParams& params, const Rates& rates,
                                           const LatticeState& initial, std::uint64_t min_events,
                                           RngStream& rng);

double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace asep
