#include <doctest.h>

#include <cmath>

#include "asep/pde.hpp"
#include "asep/traces.hpp"

using namespace asep;

namespace {

DensityField fill(const Profile& v0, int cells, double T, int frames) {
  DensityField f(uniform_times(T, frames), cells);
  const auto values = v0.discretize(cells);
  for (std::size_t j = 0; j < f.frames(); ++j)
    for (int m = 0; m < cells; ++m) f.at(j, m) = values[m];
  return f;
}

Snapshot snapshot_of(Occupation eta, double t) {
  Snapshot s;
  s.eta = std::move(eta);
  s.t = t;
  return s;
}

}  // namespace

TEST_CASE("estimate_traces examples") {
  SUBCASE("upward step: u- = 0, u+ = 1") {
    const auto est = estimate_traces(fill(Profile::step(0.5), 200, 1.0, 10), 0.1);
    for (double u : est.u_minus) CHECK(u == 0.0);
    for (double u : est.u_plus) CHECK(u == 1.0);
    CHECK(est.strip_width == 0.1);
    CHECK(est.u0[10] == 0.0);
    CHECK(est.u0[190] == 1.0);
  }
  SUBCASE("constant field") {
    const auto est = estimate_traces(fill(Profile::constant(0.37), 100, 2.0, 8), 0.05);
    for (double u : est.u_minus) CHECK(u == doctest::Approx(0.37));
    for (double u : est.u_plus) CHECK(u == doctest::Approx(0.37));
    for (double u : est.u0) CHECK(u == doctest::Approx(0.37));
    for (double v : est.var_minus) CHECK(v == 0.0);
  }
  SUBCASE("rarefaction reaching the left boundary") {
    // fan from x0 = 0.3 reaches x = 0 at t = 0.3; afterwards u(t, 0) = (1 + 0.3 / t) / 2
    const double x0 = 0.3;
    Grid g;
    g.cells = 1600;
    g.T = 0.6;
    g.frames = 12;
    g.dt = 0.9 * godunov_stable_dt(g.dx(), 1.0);
    const BoundaryData bd{Profile::jump(1.0, 0.0, x0), ScalarSchedule(1.0), ScalarSchedule(0.0)};
    const auto sol = solve_entropy(bd, 1.0, g);
    const double eps = 0.05;
    const auto est = estimate_traces(sol.field, eps);
    const auto exact = riemann_exact(1.0, 0.0, 1.0);
    for (std::size_t j = 1; j < est.t.size(); ++j) {
      const double t = est.t[j];
      // boundary data 1 on the left: the trace is the fan value where it meets x = 0, else 1
      CHECK(std::abs(est.u_minus[j] - exact(t, -x0)) <= 2 * eps);
    }
  }
  SUBCASE("rejects strips outside [2 dx, 1/4)") {
    const auto f = fill(Profile::constant(0.5), 100, 1.0, 4);
    CHECK_THROWS_AS(estimate_traces(f, 0.015), ParameterError);
    CHECK_THROWS_AS(estimate_traces(f, 0.25), ParameterError);
    CHECK_NOTHROW(estimate_traces(f, 0.02));
  }
}

TEST_CASE("default strip width") {
  CHECK(default_strip_width(0.01) == doctest::Approx(0.1));
  CHECK(default_strip_width(0.5) == 1.0);
}

TEST_CASE("shrinking strips converge for entropy solutions") {
  Grid g;
  g.cells = 3200;
  g.T = 0.5;
  g.frames = 10;
  g.dt = 0.9 * godunov_stable_dt(g.dx(), 1.0);
  const BoundaryData bd{Profile::sine(0.3), ScalarSchedule(0.2), ScalarSchedule(0.9)};
  const auto sol = solve_entropy(bd, 1.0, g);
  std::vector<TraceEstimate> est;
  for (double eps : {0.08, 0.04, 0.02, 0.01}) est.push_back(estimate_traces(sol.field, eps));
  auto diff = [&](std::size_t a) {
    double d = 0.0;
    for (std::size_t j = 0; j < est[a].t.size(); ++j)
      d += std::abs(est[a].u_minus[j] - est[a + 1].u_minus[j]) + std::abs(est[a].u_plus[j] - est[a + 1].u_plus[j]);
    return d;
  };
  CHECK(diff(1) < diff(0));
  CHECK(diff(2) < diff(1));
}

TEST_CASE("average_traces and check_traces") {
  auto a = estimate_traces(fill(Profile::step(0.5), 100, 1.0, 4), 0.05);
  auto b = a;
  for (auto& u : b.u_minus) u = 0.1;
  const std::vector<TraceEstimate> both{a, b};
  const auto avg = average_traces(both);
  for (std::size_t j = 0; j < avg.t.size(); ++j) {
    CHECK(avg.u_minus[j] == doctest::Approx(0.05));
    // squared standard error of {0, 0.1}: sample variance 0.005 over 2
    CHECK(avg.var_minus[j] == doctest::Approx(0.0025));
    CHECK(avg.var_plus[j] == 0.0);
  }
  const std::vector<double> zeros(avg.t.size(), 0.0), ones(avg.t.size(), 1.0);
  const auto ok = check_traces(avg, zeros, ones, 0.01);
  CHECK(ok.pass_fraction == 1.0);
  const auto bad = check_traces(avg, ones, zeros, 0.01);
  CHECK(bad.pass_fraction == 0.0);

  const auto j = to_json(avg, &ok);
  CHECK(j.at("strip_width") == 0.05);
  CHECK(j.at("u_minus").size() == avg.t.size());
  CHECK(j.contains("pass_fraction"));
}

TEST_CASE("mass examples") {
  CHECK(mass(fill(Profile::constant(0.3), 50, 1.0, 2), 1) == doctest::Approx(0.3));
  CHECK(mass(fill(Profile::step(0.3), 100, 1.0, 2), 0) == doctest::Approx(0.7));
  const auto f = fill(Profile::sine(0.3), 64, 1.0, 2);
  DensityField flipped(f.times(), 64);
  for (std::size_t j = 0; j < f.frames(); ++j)
    for (int m = 0; m < 64; ++m) flipped.at(j, m) = 1 - f.at(j, m);
  CHECK(mass(f, 1) == doctest::Approx(1 - mass(flipped, 1)));
}

TEST_CASE("stationary_profile examples") {
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(stationary_profile(0.0)(x) == 0.0);
    CHECK(stationary_profile(1.0)(x) == 1.0);
  }
  CHECK(stationary_profile(0.5)(0.4) == 0.0);
  CHECK(stationary_profile(0.5)(0.6) == 1.0);
  CHECK_THROWS_AS(stationary_profile(1.5), ParameterError);
}

TEST_CASE("boundary_flux_diagnostic examples") {
  const std::vector<Snapshot> zeros{snapshot_of(Occupation(100, 0), 0.0), snapshot_of(Occupation(100, 0), 1.0)};
  CHECK(boundary_flux_diagnostic(zeros, 0.1) == 0.0);
  const std::vector<Snapshot> ones{snapshot_of(Occupation(100, 1), 0.0)};
  CHECK(boundary_flux_diagnostic(ones, 0.1) == 0.0);
  Occupation alt(100);
  for (int i = 0; i < 100; i += 2) alt[i] = 1;
  // sites 1..10: eta_i (1 - eta_{i+1}) = 1 at odd sites
  CHECK(boundary_flux_diagnostic(std::vector<Snapshot>{snapshot_of(alt, 0.0)}, 0.1) == doctest::Approx(0.5));
}
