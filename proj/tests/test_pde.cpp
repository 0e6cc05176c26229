#include <doctest.h>

#include <cmath>

#include "asep/pde.hpp"
#include "asep/traces.hpp"

using namespace asep;

namespace {

Grid grid_for(int cells, double T, int frames, double p = 1.0) {
  Grid g;
  g.cells = cells;
  g.T = T;
  g.frames = frames;
  g.dt = 0.9 * godunov_stable_dt(g.dx(), p);
  return g;
}

double riemann_l1(const DensityField& f, const RiemannSolution& exact, double x0, std::size_t j) {
  double err = 0.0;
  for (int m = 0; m < f.cells(); ++m) err += std::abs(f.at(j, m) - exact(f.times()[j], f.x(m) - x0));
  return err * f.dx();
}

}  // namespace

TEST_CASE("flux_J and godunov_flux examples") {
  CHECK(flux_J(0.0, 1.0) == 0.0);
  CHECK(flux_J(1.0, 1.0) == 0.0);
  CHECK(flux_J(0.5, 1.0) == 0.25);
  CHECK(godunov_flux(0.0, 1.0, 1.0) == 0.0);
  CHECK(godunov_flux(1.0, 0.0, 1.0) == 0.25);
  for (double u : {0.0, 0.2, 0.5, 0.9}) CHECK(godunov_flux(u, u, 2.0) == doctest::Approx(flux_J(u, 2.0)));
  CHECK(godunov_flux(0.9, 0.7, 1.0) == doctest::Approx(flux_J(0.7, 1.0)));
  CHECK_THROWS_AS(godunov_flux(-0.1, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(godunov_flux(0.5, 1.1, 1.0), ParameterError);
}

TEST_CASE("godunov flux is monotone") {
  const int N = 41;
  for (int i = 0; i < N; ++i) {
    const double a = double(i) / (N - 1);
    for (int k = 0; k + 1 < N; ++k) {
      const double b = double(k) / (N - 1), b2 = double(k + 1) / (N - 1);
      CHECK(godunov_flux(a, b2, 1.0) <= godunov_flux(a, b, 1.0) + 1e-15);
      CHECK(godunov_flux(b2, a, 1.0) >= godunov_flux(b, a, 1.0) - 1e-15);
    }
  }
  // the closed boundaries carry no flux
  for (int i = 0; i < N; ++i) {
    const double u = double(i) / (N - 1);
    CHECK(godunov_flux(0.0, u, 1.0) == 0.0);
    CHECK(godunov_flux(u, 1.0, 1.0) == 0.0);
  }
}

TEST_CASE("riemann_exact examples") {
  const auto shock = riemann_exact(0.0, 1.0, 1.0);
  CHECK(shock.is_shock());
  CHECK(shock.shock_speed() == 0.0);
  CHECK(shock(1.0, -0.01) == 0.0);
  CHECK(shock(1.0, 0.01) == 1.0);

  const auto fan = riemann_exact(1.0, 0.0, 1.0);
  CHECK_FALSE(fan.is_shock());
  for (double xi : {-1.0, -0.5, 0.0, 0.3, 1.0}) CHECK(fan(1.0, xi) == doctest::Approx((1 - xi) / 2));
  CHECK(fan(2.0, -3.0) == 1.0);
  CHECK(fan(2.0, 3.0) == 0.0);
  CHECK(fan(0.0, -0.1) == 1.0);
  CHECK(fan(0.0, 0.1) == 0.0);

  const auto flat = riemann_exact(0.3, 0.3, 1.0);
  CHECK(flat(1.0, -5.0) == 0.3);
  CHECK(flat(1.0, 5.0) == 0.3);

  CHECK(riemann_exact(0.2, 0.6, 2.0).shock_speed() == doctest::Approx(0.4));
}

TEST_CASE("solve_entropy: constants are preserved") {
  for (double c : {0.0, 0.25, 0.5, 1.0}) {
    const BoundaryData bd{Profile::constant(c), ScalarSchedule(c), ScalarSchedule(c)};
    const auto sol = solve_entropy(bd, 1.0, grid_for(50, 0.5, 5));
    for (std::size_t j = 0; j < sol.field.frames(); ++j)
      for (double u : sol.field.frame(j)) CHECK(u == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("solve_entropy: stationary upward shocks with v- = 0, v+ = 1") {
  for (double y : {0.2, 0.5, 0.7}) {
    const BoundaryData bd{Profile::step(y), ScalarSchedule(0.0), ScalarSchedule(1.0)};
    const auto sol = solve_entropy(bd, 1.0, grid_for(100, 1.0, 10));
    const auto expect = Profile::step(y).discretize(100);
    for (std::size_t j = 0; j < sol.field.frames(); ++j) {
      for (int m = 0; m < 100; ++m) CHECK(sol.field.at(j, m) == expect[m]);
      CHECK(mass(sol.field, j) == doctest::Approx(1 - y).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve_entropy: closed boundaries conserve mass exactly") {
  const BoundaryData bd{Profile::sine(0.3), ScalarSchedule(0.0), ScalarSchedule(1.0)};
  const auto sol = solve_entropy(bd, 1.0, grid_for(200, 2.0, 20));
  const double m0 = mass(sol.field, 0);
  for (std::size_t j = 0; j < sol.field.frames(); ++j) {
    CHECK(std::abs(mass(sol.field, j) - m0) <= 1e-10);
    CHECK(sol.inflow_left[j] == 0.0);
    CHECK(sol.outflow_right[j] == 0.0);
  }
}

TEST_CASE("solve_entropy: mass changes by the boundary flux exactly") {
  const BoundaryData bd{Profile::sine(0.3), ScalarSchedule({0.0, 0.3}, {0.8, 0.1}),
                        ScalarSchedule(0.4)};
  const auto sol = solve_entropy(bd, 1.5, grid_for(160, 1.0, 10, 1.5));
  const double m0 = mass(sol.field, 0);
  for (std::size_t j = 0; j < sol.field.frames(); ++j) {
    CHECK(std::abs(mass(sol.field, j) - m0 - (sol.inflow_left[j] - sol.outflow_right[j])) <= 1e-12);
    double lo = 1.0, hi = 0.0;
    for (double u : sol.field.frame(j)) {
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    // maximum principle with inputs spanning [0.1, 0.8] and v0 in [0.2, 0.8]
    CHECK(lo >= 0.1 - 1e-12);
    CHECK(hi <= 0.8 + 1e-12);
  }
}

TEST_CASE("solve_entropy: rarefaction matches riemann_exact within C sqrt(dx)") {
  const double x0 = 0.5;
  const auto exact = riemann_exact(1.0, 0.0, 1.0);
  for (int cells : {100, 400, 1600}) {
    const BoundaryData bd{Profile::jump(1.0, 0.0, x0), ScalarSchedule(1.0), ScalarSchedule(0.0)};
    const auto sol = solve_entropy(bd, 1.0, grid_for(cells, 0.4, 4));
    const double err = riemann_l1(sol.field, exact, x0, 4);
    CHECK(err <= 0.5 * std::sqrt(1.0 / cells));
  }
}

TEST_CASE("solve_entropy rejects CFL violations") {
  auto g = grid_for(100, 1.0, 5);
  g.dt = 1.01 * godunov_stable_dt(g.dx(), 1.0);
  const BoundaryData bd{Profile::constant(0.5), ScalarSchedule(0.5), ScalarSchedule(0.5)};
  CHECK_THROWS_AS(solve_entropy(bd, 1.0, g), ParameterError);
}

TEST_CASE("boundary value formulas") {
  CHECK(boundary_values_fast(Rates{1, 1, 1, 1}).first == 0.5);
  CHECK(boundary_values_fast(Rates{2, 1, 1, 1}).first == doctest::Approx(2.0 / 3.0));
  CHECK(boundary_values_fast(Rates{1, 0, 1, 1}).second == 1.0);
  CHECK_THROWS_AS(boundary_values_fast(Rates{0, 1, 0, 1}), ParameterError);

  CHECK(boundary_values_viscous_limit(1.0, Rates{0, 1, 0, 1}).first == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(boundary_values_viscous_limit(1.0, Rates{1, 0, 1, 0}).second == doctest::Approx(1.0));
  CHECK(boundary_values_viscous_limit(1.0, Rates{1, 1, 0.5, 0.5}).first == doctest::Approx(0.5));
  CHECK_THROWS_AS(boundary_values_viscous_limit(0.0, Rates{1, 1, 1, 1}), ParameterError);
}

TEST_CASE("liggett_check") {
  const auto ok = liggett_check(1.0, 1.0, Rates{1, 1, 0.5, 0.5});
  CHECK(ok.holds);
  REQUIRE(ok.values);
  CHECK(ok.values->first == doctest::Approx(0.5));
  CHECK(ok.values->second == doctest::Approx(0.5));
  CHECK_FALSE(liggett_check(1.0, 1.0, Rates{}).holds);

  RngStream rng(7, 0);
  for (int rep = 0; rep < 500; ++rep) {
    const double p = 0.1 + 3 * rng.uniform(), sigma = 0.1 + 3 * rng.uniform();
    const double a = (p + sigma) * rng.uniform(), d = sigma * rng.uniform();
    const Rates r{a, (p + sigma) * (1 - d / sigma), sigma * (1 - a / (p + sigma)), d};
    const auto res = liggett_check(p, sigma, r);
    CHECK(res.holds);
    REQUIRE(res.values);
    const auto radical = boundary_values_viscous_limit(p, r);
    CHECK(std::abs(res.values->first - radical.first) <= 1e-10);
    CHECK(std::abs(res.values->second - radical.second) <= 1e-10);
  }
}

TEST_CASE("solve_viscous: slow regime with closed reservoirs conserves mass") {
  const ViscousProblem prob{Profile::sine(0.3), Rates{}, 0.01, Regime::slow};
  Grid g;
  g.cells = 200;
  g.T = 1.0;
  g.frames = 10;
  g.dt = 0.9 * viscous_stable_dt(prob, 1.0, g.dx());
  const auto f = solve_viscous(prob, 1.0, g);
  const double m0 = mass(f, 0);
  for (std::size_t j = 0; j < f.frames(); ++j) {
    CHECK(std::abs(mass(f, j) - m0) <= 1e-8);
    for (double u : f.frame(j)) {
      CHECK(u >= 0.0);
      CHECK(u <= 1.0);
    }
  }
  const ViscousProblem flat{Profile::constant(0.3), Rates{}, 0.01, Regime::slow};
  const auto c = solve_viscous(flat, 1.0, g);
  CHECK(std::abs(mass(c, c.frames() - 1) - 0.3) <= 1e-8);
}

TEST_CASE("solve_viscous: critical regime with Liggett rates keeps the uniform profile") {
  const Rates r{1, 1, 0.5, 0.5};  // p = sigma = 1: v_- = v_+ = 1/2
  const ViscousProblem prob{Profile::constant(0.5), r, 0.02, Regime::critical};
  Grid g;
  g.cells = 200;
  g.T = 1.0;
  g.frames = 5;
  g.dt = 0.9 * viscous_stable_dt(prob, 1.0, g.dx());
  const auto f = solve_viscous(prob, 1.0, g);
  for (double u : f.frame(f.frames() - 1)) CHECK(std::abs(u - 0.5) <= g.dx());
}

TEST_CASE("solve_viscous: fast regime pins the boundary cells") {
  const Rates r{2, 1, 1, 3};
  const ViscousProblem prob{Profile::constant(0.1), r, 0.01, Regime::fast};
  Grid g;
  g.cells = 100;
  g.T = 0.5;
  g.frames = 5;
  g.dt = 0.9 * viscous_stable_dt(prob, 1.0, g.dx());
  const auto f = solve_viscous(prob, 1.0, g);
  for (std::size_t j = 1; j < f.frames(); ++j) {
    CHECK(f.at(j, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(f.at(j, 99) == doctest::Approx(0.75));
  }
}

TEST_CASE("solve_viscous rejects bad inputs") {
  const ViscousProblem prob{Profile::constant(0.5), Rates{1, 1, 1, 1}, 0.01, Regime::critical};
  Grid g;
  g.cells = 100;
  g.T = 0.1;
  g.frames = 2;
  g.dt = 1.01 * viscous_stable_dt(prob, 1.0, g.dx());
  CHECK_THROWS_AS(solve_viscous(prob, 1.0, g), ParameterError);
  g.dt = 0.5 * viscous_stable_dt(prob, 1.0, g.dx());
  const RateSchedule varying({0.0, 0.05}, {Rates{1, 1, 1, 1}, Rates{0, 1, 1, 0}});
  CHECK_THROWS_AS(solve_viscous(Profile::constant(0.5), varying, 0.01, Regime::critical, 1.0, g),
                  ParameterError);
  const ViscousProblem fast_bad{Profile::constant(0.5), Rates{0, 1, 0, 1}, 0.01, Regime::fast};
  CHECK_THROWS_AS(solve_viscous(fast_bad, 1.0, g), ParameterError);
}

TEST_CASE("boundary_schedules follow the rate intervals") {
  const RateSchedule r({0.0, 0.5}, {Rates{1, 1, 1, 1}, Rates{2, 0, 1, 1}});
  const auto [lo, hi] = boundary_schedules(r, BoundaryLaw::fast, 1.0);
  CHECK(lo.at(0.2) == 0.5);
  CHECK(lo.at(0.7) == doctest::Approx(2.0 / 3.0));
  CHECK(hi.at(0.7) == 1.0);
  const auto closed = boundary_schedules(r, BoundaryLaw::closed, 1.0);
  CHECK(closed.first.at(0.7) == 0.0);
  CHECK(closed.second.at(0.7) == 1.0);
}
