#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "asep/grid.hpp"
#include "asep/params.hpp"
#include "asep/profile.hpp"
#include "asep/schedule.hpp"
#include "asep/sim.hpp"

namespace asep {

/// Strip-averaged initial and boundary traces of a density field.
struct TraceEstimate {
  std::vector<double> x;        // cell centers for u0
  std::vector<double> u0;
  std::vector<double> t;        // frame times for u_minus / u_plus
  std::vector<double> u_minus;
  std::vector<double> u_plus;
  std::vector<double> var_minus;  // estimator variance per time bin
  std::vector<double> var_plus;
  double strip_width = 0.0;
};

/// max(2 dx, sqrt(dx)).
double default_strip_width(double dx);

/// u_-(t) averages u over x in [0, eps], u_+(t) over [1 - eps, 1] (cells whose
/// centers fall in the strip), u0(x) averages the frames with t <= eps T.
/// Requires eps >= 2 dx and eps < 1/4.
TraceEstimate estimate_traces(const DensityField& field, double eps_strip);

/// Frame-wise mean of several estimates on the same grid; var_* becomes the
/// squared standard error across the inputs.
TraceEstimate average_traces(std::span<const TraceEstimate> estimates);

struct TraceCheck {
  std::vector<bool> left_ok;
  std::vector<bool> right_ok;
  double pass_fraction = 0.0;  // fraction of time bins where both sides pass
};

/// check_trace_set per time bin with tau_j = 2 (sqrt(dx) + sqrt(var_j)).
TraceCheck check_traces(const TraceEstimate& est, std::span<const double> v_minus,
                        std::span<const double> v_plus, double dx);

nlohmann::json to_json(const TraceEstimate& est, const TraceCheck* check = nullptr);

/// int_0^1 u(t_j, x) dx as sum u dx.
double mass(const DensityField& field, std::size_t frame);

/// 1_{(1-m, 1)}.
Profile stationary_profile(double m);

/// Average of eta_i (1 - eta_{i+1}) over sites 1 <= i <= floor(eps n) and all snapshots.
double boundary_flux_diagnostic(std::span<const Snapshot> snapshots, double eps);

}  // namespace asep
