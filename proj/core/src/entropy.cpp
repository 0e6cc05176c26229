#include "asep/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "asep/params.hpp"

namespace asep {
namespace {

inline double J(double u) { return u * (1.0 - u); }

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

/// int_a^b g(w) dw with the integrand split at the given kinks; the pieces are
/// polynomials of low degree so each Gauss-Kronrod panel is essentially exact.
template <class G>
double integrate_piecewise(G&& g, double a, double b, std::vector<double> kinks) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  kinks.erase(std::remove_if(kinks.begin(), kinks.end(),
                             [&](double k) { return !(k > lo && k < hi); }),
              kinks.end());
  kinks.push_back(lo);
  kinks.push_back(hi);
  std::sort(kinks.begin(), kinks.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    if (kinks[i + 1] <= kinks[i]) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, kinks[i], kinks[i + 1],
                                                                         5, 1e-14);
  }
  return sign * sum;
}

void check_unit(double u, const char* what) {
  if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
    throw ParameterError(std::string(what) + ": argument outside [0, 1]");
}

}  // namespace

std::string EntropyPair::tag() const {
  switch (kind) {
    case Kind::kruzhkov:
      return "kruzhkov(c=" + std::to_string(c) + ")";
    case Kind::smooth:
      return "smooth(m=" + std::to_string(m) + ",c=" + std::to_string(c) + ")";
    case Kind::custom:
      break;
  }
  return "custom";
}

EntropyPair kruzhkov_pair(double c) {
  check_unit(c, "kruzhkov_pair");
  EntropyPair pair;
  pair.kind = EntropyPair::Kind::kruzhkov;
  pair.c = c;
  pair.F = [c](double u) { return std::abs(u - c); };
  pair.dF = [c](double u) { return sgn(u - c); };
  pair.Q = [c](double u) { return sgn(u - c) * (J(u) - J(c)); };
  return pair;
}

double mollifier(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return a;
  const double u2 = u * u;
  return 0.375 + 0.75 * u2 - 0.125 * u2 * u2;
}

double mollifier_derivative(double u) {
  if (u >= 1.0) return 1.0;
  if (u <= -1.0) return -1.0;
  return 1.5 * u - 0.5 * u * u * u;
}

EntropyPair smooth_pair(int m, double c) {
  if (m < 1) throw ParameterError("smooth_pair: m must be >= 1");
  check_unit(c, "smooth_pair");
  EntropyPair pair;
  pair.kind = EntropyPair::Kind::smooth;
  pair.m = m;
  pair.c = c;
  const double md = m;
  pair.F = [md, c](double u) { return mollifier(md * (u - c)) / md; };
  pair.dF = [md, c](double u) { return mollifier_derivative(md * (u - c)); };
  pair.Q = [md, c](double u) {
    auto g = [md, c](double w) { return (1.0 - 2.0 * w) * mollifier_derivative(md * (w - c)); };
    return integrate_piecewise(g, c, u, {c - 1.0 / md, c + 1.0 / md});
  };
  return pair;
}

// ---------------------------------------------------------------------------

double BoundaryEntropyFlux::plateau_low() const {
  return side == Side::left ? std::min(0.5, v) - 1.0 / m : v - 1.0 / m;
}

double BoundaryEntropyFlux::plateau_high() const {
  return side == Side::left ? v + 1.0 / m : std::max(0.5, v) + 1.0 / m;
}

double BoundaryEntropyFlux::f(double w) const {
  const double h = 1.0 / m;
  const double lo = plateau_low(), hi = plateau_high();
  if (w <= lo - h) return -1.0;
  if (w < lo) return (w - lo) / h;
  if (w <= hi) return 0.0;
  if (w < hi + h) return (w - hi) / h;
  return 1.0;
}

double BoundaryEntropyFlux::operator()(double u) const {
  const double h = 1.0 / m;
  const double lo = plateau_low(), hi = plateau_high();
  auto g = [this](double w) { return (1.0 - 2.0 * w) * f(w); };
  return integrate_piecewise(g, v, u, {lo - h, lo, hi, hi + h});
}

BoundaryEntropyFlux boundary_flux_Qm(int m, double v, Side side) {
  if (m < 1) throw ParameterError("boundary_flux_Qm: m must be >= 1");
  check_unit(v, "boundary_flux_Qm");
  return BoundaryEntropyFlux{m, v, side};
}

// ---------------------------------------------------------------------------

TestFunction bump(double t0, double half_t, double x0, double half_x) {
  if (!(half_t > 0.0) || !(half_x > 0.0))
    throw ParameterError("bump: half widths must be > 0");
  TestFunction psi;
  psi.t_min = t0 - half_t;
  psi.t_max = t0 + half_t;
  psi.x_min = x0 - half_x;
  psi.x_max = x0 + half_x;
  psi.value = [=](double t, double x) {
    const double s = (t - t0) / half_t, r = (x - x0) / half_x;
    if (std::abs(s) >= 1.0 || std::abs(r) >= 1.0) return 0.0;
    const double a = 1.0 - s * s, b = 1.0 - r * r;
    return a * a * a * b * b * b;
  };
  return psi;
}

double entropy_production(const DensityField& field, const EntropyPair& pair, double p,
                          const TestFunction& psi) {
  const auto& times = field.times();
  if (times.size() < 2 || field.cells() < 2)
    throw ParameterError("entropy_production: field needs >= 2 frames and >= 2 cells");
  const double T = times.back();
  if (!(psi.t_min > times.front() && psi.t_max < T && psi.x_min > 0.0 && psi.x_max < 1.0))
    throw ParameterError("entropy_production: test function support must lie in (0, T) x (0, 1)");

  const int M = field.cells();
  const std::size_t nt = times.size();
  const double dx = field.dx();

  // psi on the grid, and F(u), Q(u) per sample
  std::vector<double> P(nt * M), F(nt * M), Q(nt * M);
  for (std::size_t j = 0; j < nt; ++j)
    for (int m = 0; m < M; ++m) {
      const std::size_t idx = j * M + m;
      const double u = field.at(j, m);
      P[idx] = psi.value(times[j], field.x(m));
      F[idx] = pair.F(u);
      Q[idx] = pair.Q(u);
    }

  // time part: sum_m dx sum_j avg(F) (psi_{j+1} - psi_j)
  double time_part = 0.0;
  for (int m = 0; m < M; ++m)
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      const std::size_t a = j * M + m, b = a + M;
      time_part += 0.5 * (F[a] + F[b]) * (P[b] - P[a]);
    }
  time_part *= dx;

  // space part: sum_j w_j sum_m avg(Q) (psi_{m+1} - psi_m), trapezoidal weights in time
  double space_part = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    const double w = 0.5 * ((j + 1 < nt ? times[j + 1] - times[j] : 0.0) +
                            (j > 0 ? times[j] - times[j - 1] : 0.0));
    if (w == 0.0) continue;
    // psi vanishes outside (0, 1); the end terms only matter if its support
    // reaches past the first or last cell center
    const std::size_t first = j * M, last = first + M - 1;
    double row = Q[first] * P[first] - Q[last] * P[last];
    for (int m = 0; m + 1 < M; ++m) {
      const std::size_t a = j * M + m;
      row += 0.5 * (Q[a] + Q[a + 1]) * (P[a + 1] - P[a]);
    }
    space_part += w * row;
  }
  return time_part + p * space_part;
}

bool check_trace_set(double u, double v, Side side, double tau) {
  check_unit(u, "check_trace_set");
  check_unit(v, "check_trace_set");
  if (std::abs(u - v) <= tau) return true;
  if (side == Side::left) return u >= 1.0 - std::min(0.5, v) - tau;
  return u <= 1.0 - std::max(0.5, v) + tau;
}

}  // namespace asep
