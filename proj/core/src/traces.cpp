#include "asep/traces.hpp"

#include <algorithm>
#include <cmath>

#include "asep/entropy.hpp"

namespace asep {

double default_strip_width(double dx) { return std::max(2.0 * dx, std::sqrt(dx)); }

TraceEstimate estimate_traces(const DensityField& field, double eps_strip) {
  const double dx = field.dx();
  if (!(eps_strip >= 2.0 * dx * (1.0 - 1e-12)) || !(eps_strip < 0.25))
    throw ParameterError("estimate_traces: need 2 dx <= eps_strip < 1/4");
  if (field.frames() == 0) throw ParameterError("estimate_traces: empty field");

  const int M = field.cells();
  TraceEstimate est;
  est.strip_width = eps_strip;
  est.t = field.times();

  // cells whose centers lie in [0, eps] and [1 - eps, 1]
  const int width = std::max(1, static_cast<int>(std::floor(eps_strip / dx + 0.5 + 1e-9)));
  for (std::size_t j = 0; j < field.frames(); ++j) {
    const auto row = field.frame(j);
    double left = 0.0, right = 0.0;
    for (int m = 0; m < width; ++m) {
      left += row[m];
      right += row[M - 1 - m];
    }
    est.u_minus.push_back(left / width);
    est.u_plus.push_back(right / width);
  }
  est.var_minus.assign(est.t.size(), 0.0);
  est.var_plus.assign(est.t.size(), 0.0);

  const double t_cut = eps_strip * est.t.back();
  std::size_t used = 0;
  est.u0.assign(M, 0.0);
  for (std::size_t j = 0; j < field.frames() && (j == 0 || est.t[j] <= t_cut); ++j, ++used) {
    const auto row = field.frame(j);
    for (int m = 0; m < M; ++m) est.u0[m] += row[m];
  }
  for (auto& v : est.u0) v /= static_cast<double>(used);
  est.x.resize(M);
  for (int m = 0; m < M; ++m) est.x[m] = field.x(m);
  return est;
}

TraceEstimate average_traces(std::span<const TraceEstimate> estimates) {
  if (estimates.empty()) throw ParameterError("average_traces: no estimates");
  const auto& first = estimates.front();
  for (const auto& e : estimates)
    if (e.t.size() != first.t.size() || e.u0.size() != first.u0.size())
      throw ParameterError("average_traces: estimates on different grids");

  const double R = static_cast<double>(estimates.size());
  TraceEstimate out = first;
  auto mean_and_se = [&](auto member, std::vector<double>& mean, std::vector<double>* se) {
    const std::size_t size = (first.*member).size();
    mean.assign(size, 0.0);
    for (const auto& e : estimates)
      for (std::size_t i = 0; i < size; ++i) mean[i] += (e.*member)[i] / R;
    if (!se) return;
    se->assign(size, 0.0);
    if (estimates.size() < 2) return;
    for (const auto& e : estimates)
      for (std::size_t i = 0; i < size; ++i) {
        const double d = (e.*member)[i] - mean[i];
        (*se)[i] += d * d;
      }
    for (auto& v : *se) v /= (R - 1.0) * R;
  };
  mean_and_se(&TraceEstimate::u0, out.u0, nullptr);
  mean_and_se(&TraceEstimate::u_minus, out.u_minus, &out.var_minus);
  mean_and_se(&TraceEstimate::u_plus, out.u_plus, &out.var_plus);
  return out;
}

TraceCheck check_traces(const TraceEstimate& est, std::span<const double> v_minus,
                        std::span<const double> v_plus, double dx) {
  const std::size_t size = est.t.size();
  if (v_minus.size() != size || v_plus.size() != size)
    throw ParameterError("check_traces: boundary data must have one value per time bin");
  TraceCheck out;
  std::size_t both = 0;
  for (std::size_t j = 0; j < size; ++j) {
    const double root = std::sqrt(dx);
    const double tau_l = 2.0 * (root + std::sqrt(est.var_minus[j]));
    const double tau_r = 2.0 * (root + std::sqrt(est.var_plus[j]));
    const bool l = check_trace_set(std::clamp(est.u_minus[j], 0.0, 1.0), v_minus[j], Side::left, tau_l);
    const bool r = check_trace_set(std::clamp(est.u_plus[j], 0.0, 1.0), v_plus[j], Side::right, tau_r);
    out.left_ok.push_back(l);
    out.right_ok.push_back(r);
    both += l && r;
  }
  out.pass_fraction = size ? static_cast<double>(both) / size : 0.0;
  return out;
}

nlohmann::json to_json(const TraceEstimate& est, const TraceCheck* check) {
  nlohmann::json j;
  j["strip_width"] = est.strip_width;
  j["t"] = est.t;
  j["u_minus"] = est.u_minus;
  j["u_plus"] = est.u_plus;
  j["var_minus"] = est.var_minus;
  j["var_plus"] = est.var_plus;
  j["x"] = est.x;
  j["u0"] = est.u0;
  if (check) {
    j["left_ok"] = check->left_ok;
    j["right_ok"] = check->right_ok;
    j["pass_fraction"] = check->pass_fraction;
  }
  return j;
}

double mass(const DensityField& field, std::size_t frame) {
  double sum = 0.0;
  for (double u : field.frame(frame)) sum += u;
  return sum * field.dx();
}

Profile stationary_profile(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw ParameterError("stationary_profile: mass must be in [0, 1]");
  return Profile::step(1.0 - m);
}

double boundary_flux_diagnostic(std::span<const Snapshot> snapshots, double eps) {
  if (snapshots.empty()) throw ParameterError("boundary_flux_diagnostic: no snapshots");
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("boundary_flux_diagnostic: eps must be in (0, 1]");
  const int n = static_cast<int>(snapshots.front().eta.size());
  const int last = std::min(n - 1, static_cast<int>(std::floor(eps * n)));
  if (last < 1) throw ParameterError("boundary_flux_diagnostic: eps n < 1");
  double sum = 0.0;
  for (const auto& s : snapshots)
    for (int i = 1; i <= last; ++i) sum += s.eta[i - 1] * (1 - s.eta[i]);
  return sum / (static_cast<double>(last) * snapshots.size());
}

}  // namespace asep
