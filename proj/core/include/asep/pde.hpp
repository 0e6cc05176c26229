#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "asep/grid.hpp"
#include "asep/profile.hpp"
#include "asep/schedule.hpp"

namespace asep {

/// Initial profile plus Dirichlet data for u_t + p (u(1-u))_x = 0 on [0, 1].
struct BoundaryData {
  Profile v0;
  ScalarSchedule v_minus;
  ScalarSchedule v_plus;
};

/// J(u) scaled by the drift: p u (1 - u).
double flux_J(double u, double p);

/// Godunov flux for the concave flux p u (1-u); throws ParameterError outside [0,1].
double godunov_flux(double a, double b, double p);

/// Largest dt the explicit Godunov scheme accepts: dx / p.
double godunov_stable_dt(double dx, double p);

struct EntropySolution {
  DensityField field;
  /// Time-integrated flux through x = 0 (into the domain) and x = 1 (out of
  /// the domain) up to each frame.
  std::vector<double> inflow_left;
  std::vector<double> outflow_right;
  long long steps = 0;
};

/// First-order Godunov finite volumes with Dirichlet ghost cells carrying
/// v_minus(t) and v_plus(t). Rejects grids with dt > dx / p.
EntropySolution solve_entropy(const BoundaryData& bd, double p, const Grid& grid);

/// Self-similar entropy solution of the Riemann problem (u_l | u_r).
class RiemannSolution {
 public:
  RiemannSolution(double u_left, double u_right, double p);

  /// u at time t > 0 and offset x - x0; at t = 0 the initial jump.
  double operator()(double t, double offset) const;

  bool is_shock() const { return left_ < right_; }
  double shock_speed() const;  // p (1 - u_l - u_r)

 private:
  double left_;
  double right_;
  double p_;
};

RiemannSolution riemann_exact(double u_left, double u_right, double p);

/// Boundary closures of the viscous equation u_t = eps u_xx - p J(u)_x.
enum class Regime {
  fast,      // Dirichlet: u(0) = alpha/(alpha+gamma), u(1) = delta/(beta+delta)
  critical,  // Robin: total flux equals the reservoir exchange
  slow,      // no flux
};

struct ViscousProblem {
  Profile v0;
  Rates rates;
  double epsilon = 0.01;
  Regime regime = Regime::critical;
};

/// Largest dt keeping the explicit viscous scheme monotone:
/// 1 / (p/dx + 2 eps/dx^2 + r/dx) with r the largest boundary exchange rate
/// (0 outside the critical regime).
double viscous_stable_dt(const ViscousProblem& problem, double p, double dx);

/// Explicit finite volumes: Godunov convection plus central diffusion in
/// the bulk, regime-specific boundary faces. The fast regime pins the two
/// boundary cells to the Dirichlet values.
DensityField solve_viscous(const ViscousProblem& problem, double p, const Grid& grid);

/// Time-dependent wrapper rejecting non-constant schedules.
DensityField solve_viscous(const Profile& v0, const RateSchedule& rates, double epsilon,
                           Regime regime, double p, const Grid& grid);

/// (alpha/(alpha+gamma), delta/(beta+delta)); throws on zero denominators.
std::pair<double, double> boundary_values_fast(const Rates& rates);

/// Closed-form radical boundary values reached by the critical viscous limit.
std::pair<double, double> boundary_values_viscous_limit(double p, const Rates& rates);

struct LiggettResult {
  bool holds = false;
  std::optional<std::pair<double, double>> values;
};

/// Checks alpha/(p+sigma) + gamma/sigma = 1 and beta/(p+sigma) + delta/sigma = 1
/// to 1e-12. When both hold, returns (alpha/(p+sigma), delta/sigma) after
/// confirming agreement with boundary_values_viscous_limit to 1e-10.
LiggettResult liggett_check(double p, double sigma, const Rates& rates);

/// Which macroscopic boundary values a reservoir schedule induces.
enum class BoundaryLaw {
  fast,           // boundary_values_fast
  viscous_limit,  // boundary_values_viscous_limit
  closed,         // v_- = 0, v_+ = 1 regardless of rates
};

/// Dirichlet schedules (v_minus, v_plus) obtained interval by interval.
std::pair<ScalarSchedule, ScalarSchedule> boundary_schedules(const RateSchedule& rates,
                                                             BoundaryLaw law, double p);

}  // namespace asep
