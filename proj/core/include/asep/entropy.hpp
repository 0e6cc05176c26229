#pragma once

#include <functional>
#include <string>

#include "asep/grid.hpp"

namespace asep {

/// Convex entropy F with flux Q satisfying Q' = (1 - 2u) F'. The drift p is
/// applied only inside production functionals.
struct EntropyPair {
  enum class Kind { kruzhkov, smooth, custom };

  std::function<double(double)> F;
  std::function<double(double)> dF;
  std::function<double(double)> Q;
  Kind kind = Kind::custom;
  int m = 0;
  double c = 0.0;

  std::string tag() const;
};

/// F = |u - c|, Q = sgn(u - c) (J(u) - J(c)).
EntropyPair kruzhkov_pair(double c);

/// C^2 even mollifier: F(u) = |u| for |u| >= 1, F'(0) = 0, F'' >= 0.
double mollifier(double u);
double mollifier_derivative(double u);

/// F_{m,c}(u) = F(m (u - c)) / m with Q_{m,c}(u) = int_c^u (1 - 2w) F'(m (w - c)) dw
/// integrated by adaptive Gauss-Kronrod quadrature.
EntropyPair smooth_pair(int m, double c);

enum class Side { left, right };

/// Section u -> Q_m(u, v) of a boundary entropy flux,
/// Q_m(u, v) = int_v^u (1 - 2w) f_m(w, v) dw, f_m a non-decreasing ramp that
/// is -1 below lo - 1/m, 0 on [lo, hi], +1 above hi + 1/m.
///
/// Side::left uses lo = min{1/2, v} - 1/m, hi = v + 1/m (separates the left
/// admissible set); Side::right mirrors it with lo = v - 1/m,
/// hi = max{1/2, v} + 1/m. Ramps extending past [0, 1] are simply evaluated
/// on [0, 1].
struct BoundaryEntropyFlux {
  int m = 1;
  double v = 0.0;
  Side side = Side::left;

  double plateau_low() const;
  double plateau_high() const;
  double f(double w) const;
  double operator()(double u) const;
};

BoundaryEntropyFlux boundary_flux_Qm(int m, double v, Side side = Side::left);

/// Non-negative test function supported in [t_min, t_max] x [x_min, x_max].
struct TestFunction {
  std::function<double(double, double)> value;
  double t_min = 0.0;
  double t_max = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

/// Smooth compactly supported bump (1 - s^2)^3 (1 - r^2)^3 on
/// (t0 - ht, t0 + ht) x (x0 - hx, x0 + hx).
TestFunction bump(double t0, double half_t, double x0, double half_x);

/// Discrete weak form of the entropy inequality on the field's own grid,
///   int int [F(u) psi_t + p Q(u) psi_x] dx dt,
/// with trapezoidal averages of F(u), Q(u) on each grid interval multiplied
/// by the exact increment of psi across it (so constants integrate to zero).
/// Entropy solutions give values >= -tol. Rejects psi whose support is not
/// inside the open box (0, T) x (0, 1).
double entropy_production(const DensityField& field, const EntropyPair& pair, double p,
                          const TestFunction& psi);

/// Whether a boundary trace u lies in the admissible set for datum v:
///   left:  {v} U [1 - min{1/2, v}, 1]
///   right: [0, 1 - max{1/2, v}] U {v}
/// with membership tolerance tau.
bool check_trace_set(double u, double v, Side side, double tau = 1e-9);

}  // namespace asep
