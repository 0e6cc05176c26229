#include "asep/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asep {
namespace {

constexpr double kRangeSlack = 1e-12;

inline double J(double u) { return u * (1.0 - u); }

/// Godunov flux without range checks; inputs are trusted solver states.
inline double godunov(double a, double b, double p) {
  if (a <= b) return p * std::min(J(a), J(b));
  if (b <= 0.5 && 0.5 <= a) return 0.25 * p;
  return p * std::max(J(a), J(b));
}

void check_unit(double u, const char* what) {
  if (!(u >= -kRangeSlack && u <= 1.0 + kRangeSlack))
    throw ParameterError(std::string(what) + ": argument outside [0, 1]");
}

/// Advances from t towards target in steps of at most dt, also stopping at
/// the breakpoints of the two boundary schedules. Calls advance(t, h).
template <class Advance>
long long march(double& t, double target, double dt, const ScalarSchedule* a,
                const ScalarSchedule* b, Advance&& advance) {
  long long steps = 0;
  const double eps = 1e-13 * std::max(1.0, std::abs(target));
  while (t < target - eps) {
    double h = std::min(dt, target - t);
    for (const auto* s : {a, b}) {
      if (!s) continue;
      if (auto bp = s->next_breakpoint(t); bp && *bp < t + h) h = *bp - t;
    }
    advance(t, h);
    t += h;
    ++steps;
  }
  t = target;
  return steps;
}

}  // namespace

double flux_J(double u, double p) {
  check_unit(u, "flux_J");
  return p * J(u);
}

double godunov_flux(double a, double b, double p) {
  check_unit(a, "godunov_flux");
  check_unit(b, "godunov_flux");
  return godunov(a, b, p);
}

double godunov_stable_dt(double dx, double p) { return dx / p; }

EntropySolution solve_entropy(const BoundaryData& bd, double p, const Grid& grid) {
  grid.validate();
  if (!(p > 0.0)) throw ParameterError("solve_entropy: p must be > 0");
  const double dx = grid.dx();
  if (grid.dt > godunov_stable_dt(dx, p) * (1.0 + 1e-12))
    throw ParameterError("solve_entropy: CFL violated, need dt <= dx / p");

  const int M = grid.cells;
  const auto times = grid.frame_times();
  EntropySolution out{DensityField(times, M), std::vector<double>(times.size(), 0.0),
                      std::vector<double>(times.size(), 0.0), 0};

  std::vector<double> u = bd.v0.discretize(M);
  std::vector<double> flux(M + 1);
  std::copy(u.begin(), u.end(), out.field.frame(0).begin());

  double t = 0.0;
  double inflow = 0.0;
  double outflow = 0.0;
  const double lambda_scale = 1.0 / dx;
  for (std::size_t j = 1; j < times.size(); ++j) {
    out.steps += march(t, times[j], grid.dt, &bd.v_minus, &bd.v_plus, [&](double now, double h) {
      flux[0] = godunov(bd.v_minus.at(now), u[0], p);
      for (int m = 1; m < M; ++m) flux[m] = godunov(u[m - 1], u[m], p);
      flux[M] = godunov(u[M - 1], bd.v_plus.at(now), p);
      const double lambda = h * lambda_scale;
      for (int m = 0; m < M; ++m) u[m] -= lambda * (flux[m + 1] - flux[m]);
      inflow += h * flux[0];
      outflow += h * flux[M];
    });
    std::copy(u.begin(), u.end(), out.field.frame(j).begin());
    out.inflow_left[j] = inflow;
    out.outflow_right[j] = outflow;
  }
  return out;
}

// ---------------------------------------------------------------------------

RiemannSolution::RiemannSolution(double u_left, double u_right, double p)
    : left_(u_left), right_(u_right), p_(p) {
  check_unit(u_left, "riemann_exact");
  check_unit(u_right, "riemann_exact");
  if (!(p > 0.0)) throw ParameterError("riemann_exact: p must be > 0");
}

double RiemannSolution::shock_speed() const { return p_ * (1.0 - left_ - right_); }

double RiemannSolution::operator()(double t, double offset) const {
  if (t <= 0.0) return offset > 0.0 ? right_ : left_;
  if (left_ == right_) return left_;
  if (left_ < right_) return offset < shock_speed() * t ? left_ : right_;
  const double xi = offset / t;
  if (xi <= p_ * (1.0 - 2.0 * left_)) return left_;
  if (xi >= p_ * (1.0 - 2.0 * right_)) return right_;
  return 0.5 * (1.0 - xi / p_);
}

RiemannSolution riemann_exact(double u_left, double u_right, double p) {
  return RiemannSolution(u_left, u_right, p);
}

// ---------------------------------------------------------------------------

double viscous_stable_dt(const ViscousProblem& problem, double p, double dx) {
  double exchange = 0.0;
  if (problem.regime == Regime::critical) {
    const auto& r = problem.rates;
    exchange = std::max(r.alpha + r.gamma, r.beta + r.delta);
  }
  return 1.0 / (p / dx + 2.0 * problem.epsilon / (dx * dx) + exchange / dx);
}

DensityField solve_viscous(const ViscousProblem& problem, double p, const Grid& grid) {
  grid.validate();
  if (!(p > 0.0)) throw ParameterError("solve_viscous: p must be > 0");
  if (!(problem.epsilon > 0.0) || !std::isfinite(problem.epsilon))
    throw ParameterError("solve_viscous: epsilon must be > 0");
  (void)RateSchedule(problem.rates);  // validates the rates

  const int M = grid.cells;
  const double dx = grid.dx();
  if (grid.dt > viscous_stable_dt(problem, p, dx) * (1.0 + 1e-12))
    throw ParameterError("solve_viscous: CFL violated, need dt <= viscous_stable_dt");

  const auto& r = problem.rates;
  std::pair<double, double> pinned{0.0, 0.0};
  if (problem.regime == Regime::fast) {
    try {
      pinned = boundary_values_fast(r);
    } catch (const ParameterError&) {
      throw ParameterError("solve_viscous: fast regime needs alpha+gamma > 0 and beta+delta > 0");
    }
  }

  const auto times = grid.frame_times();
  DensityField field(times, M);
  std::vector<double> u = problem.v0.discretize(M);
  if (problem.regime == Regime::fast) {
    u.front() = pinned.first;
    u.back() = pinned.second;
  }
  std::copy(u.begin(), u.end(), field.frame(0).begin());

  std::vector<double> flux(M + 1, 0.0);
  const double diffusion = problem.epsilon / dx;
  double t = 0.0;
  for (std::size_t j = 1; j < times.size(); ++j) {
    march(t, times[j], grid.dt, nullptr, nullptr, [&](double, double h) {
      for (int m = 1; m < M; ++m)
        flux[m] = godunov(u[m - 1], u[m], p) - diffusion * (u[m] - u[m - 1]);
      switch (problem.regime) {
        case Regime::critical:
          flux[0] = r.alpha - (r.alpha + r.gamma) * u.front();
          flux[M] = (r.beta + r.delta) * u.back() - r.delta;
          break;
        case Regime::slow:
        case Regime::fast:  // boundary cells are pinned; their faces are never used
          flux[0] = 0.0;
          flux[M] = 0.0;
          break;
      }
      const double lambda = h / dx;
      const int first = problem.regime == Regime::fast ? 1 : 0;
      const int last = problem.regime == Regime::fast ? M - 2 : M - 1;
      for (int m = first; m <= last; ++m) u[m] -= lambda * (flux[m + 1] - flux[m]);
    });
    std::copy(u.begin(), u.end(), field.frame(j).begin());
  }
  return field;
}

DensityField solve_viscous(const Profile& v0, const RateSchedule& rates, double epsilon,
                           Regime regime, double p, const Grid& grid) {
  if (!rates.is_constant())
    throw ParameterError("solve_viscous: regime/rate mismatch, rates must be time-constant");
  return solve_viscous(ViscousProblem{v0, rates.values().front(), epsilon, regime}, p, grid);
}

// ---------------------------------------------------------------------------

std::pair<double, double> boundary_values_fast(const Rates& r) {
  if (!(r.alpha + r.gamma > 0.0) || !(r.beta + r.delta > 0.0))
    throw ParameterError("boundary_values_fast: alpha+gamma and beta+delta must be > 0");
  return {r.alpha / (r.alpha + r.gamma), r.delta / (r.beta + r.delta)};
}

std::pair<double, double> boundary_values_viscous_limit(double p, const Rates& r) {
  if (!(p > 0.0)) throw ParameterError("boundary_values_viscous_limit: p must be > 0");
  const double a = r.alpha, b = r.beta, g = r.gamma, d = r.delta;
  const double minus = (p + a + g - std::sqrt((p - a + g) * (p - a + g) + 4.0 * a * g)) / (2.0 * p);
  const double plus = (p - b - d + std::sqrt((p - b + d) * (p - b + d) + 4.0 * b * d)) / (2.0 * p);
  auto clamp_checked = [](double v) {
    if (v < -1e-9 || v > 1.0 + 1e-9)
      throw std::logic_error("boundary_values_viscous_limit: value left [0, 1]");
    return std::clamp(v, 0.0, 1.0);
  };
  return {clamp_checked(minus), clamp_checked(plus)};
}

LiggettResult liggett_check(double p, double sigma, const Rates& r) {
  if (!(p > 0.0) || !(sigma > 0.0)) throw ParameterError("liggett_check: p and sigma must be > 0");
  constexpr double tol = 1e-12;
  const bool left = std::abs(r.alpha / (p + sigma) + r.gamma / sigma - 1.0) <= tol;
  const bool right = std::abs(r.beta / (p + sigma) + r.delta / sigma - 1.0) <= tol;
  LiggettResult out;
  out.holds = left && right;
  if (!out.holds) return out;

  const std::pair<double, double> values{r.alpha / (p + sigma), r.delta / sigma};
  const auto radical = boundary_values_viscous_limit(p, r);
  if (std::abs(values.first - radical.first) > 1e-10 ||
      std::abs(values.second - radical.second) > 1e-10)
    throw std::logic_error("liggett_check: closed forms disagree with the radical formula");
  out.values = values;
  return out;
}

std::pair<ScalarSchedule, ScalarSchedule> boundary_schedules(const RateSchedule& rates,
                                                             BoundaryLaw law, double p) {
  if (law == BoundaryLaw::closed) return {ScalarSchedule(0.0), ScalarSchedule(1.0)};
  std::vector<double> minus, plus;
  for (const auto& r : rates.values()) {
    const auto v = law == BoundaryLaw::fast ? boundary_values_fast(r)
                                            : boundary_values_viscous_limit(p, r);
    minus.push_back(v.first);
    plus.push_back(v.second);
  }
  return {ScalarSchedule(rates.breakpoints(), minus), ScalarSchedule(rates.breakpoints(), plus)};
}

}  // namespace asep
