#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"
#include "sintermech/error.hpp"
#include "sintermech/heat1d.hpp"
#include "support.hpp"

using namespace sintermech;
using namespace sintermech::heat1d;
using std::numbers::pi;

namespace {

ThermalGrid dense_grid(double length, int n, double T) {
  return ThermalGrid::uniform(length, n, T, 1.0, MaterialParams{});
}

double diffusivity(const ThermalGrid& g) { return g.k_th / g.heat_capacity(0); }

/// Slab at T0 whose faces jump to T1 at t = 0.
double step_response(double x, double t, double L, double kappa, double T0, double T1) {
  double s = 0.0;
  for (int n = 1; n < 4000; n += 2) {
    s += 4.0 / (n * pi) * std::sin(n * pi * x / L) * std::exp(-n * n * pi * pi * kappa * t / (L * L));
  }
  return T1 + (T0 - T1) * s;
}

ThermalGrid run_step_response(int n, double t_end, int steps) {
  ThermalGrid g = dense_grid(0.02, n, 20.0);
  const FiringSchedule faces = FiringSchedule::constant(120.0);
  const double dt = t_end / steps;
  for (int k = 0; k < steps; ++k) g = conduction_step(g, faces, k * dt, dt);
  return g;
}

}  // namespace

TEST_CASE("firing schedule") {
  const FiringSchedule s({{0.0, 20.0}, {100.0, 220.0}, {200.0, 220.0}});
  CHECK(s.at(-1.0) == 20.0);
  CHECK(s.at(50.0) == doctest::Approx(120.0));
  CHECK(s.at(150.0) == 220.0);
  CHECK(s.at(1e6) == 220.0);
  CHECK(s.end_time() == 200.0);
  CHECK_THROWS_AS(FiringSchedule({{0.0, 20.0}, {0.0, 30.0}}), ConfigError);
  CHECK_THROWS_AS(FiringSchedule(std::vector<std::pair<double, double>>{}), ConfigError);
}

TEST_CASE("firing schedule CSV") {
  std::istringstream ok("time_s,temperature_C\n0,20\n\n60, 50\n120,50\n");
  const FiringSchedule s = FiringSchedule::parse_csv(ok);
  CHECK(s.points().size() == 3);
  CHECK(s.at(30.0) == doctest::Approx(35.0));

  auto rejects = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      FiringSchedule::parse_csv(in, "sched.csv");
      FAIL("expected a config error for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  rejects("0,20\n60,50\n", "header");
  rejects("time,temperature\n0,20\n", "header");
  rejects("time_s,temperature_C\n", "no data");
  rejects("time_s,temperature_C\n0,20\n60,abc\n", "sched.csv:3");
  rejects("time_s,temperature_C\n0,20,1\n", "two columns");
  rejects("time_s,temperature_C\n10,20\n5,30\n", "increasing");
  CHECK_THROWS_AS(FiringSchedule::load_csv("/nonexistent/schedule.csv"), ConfigError);
}

TEST_CASE("property: tridiagonal solver agrees with a dense solve") {
  testsupport::Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 30);
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = gen.uniform(-1, 1);
      up[i] = gen.uniform(-1, 1);
      di[i] = 2.5 + gen.uniform(0, 1);
      rhs[i] = b(i) = gen.uniform(-10, 10);
      A(i, i) = di[i];
      if (i > 0) A(i, i - 1) = lo[i];
      if (i + 1 < n) A(i, i + 1) = up[i];
    }
    const std::vector<double> x = solve_tridiagonal(lo, di, up, rhs);
    const Eigen::VectorXd ref = A.partialPivLu().solve(b);
    for (int i = 0; i < n; ++i) REQUIRE(std::abs(x[i] - ref(i)) <= 1e-12 * (1 + std::abs(ref(i))));
  }
  CHECK_THROWS_AS(solve_tridiagonal({0, 1}, {0, 1}, {1, 0}, {1, 1}), NumericalError);
}

TEST_CASE("conduction step preconditions") {
  ThermalGrid g = dense_grid(0.01, 5, 20.0);
  CHECK_THROWS_AS(conduction_step(g, FiringSchedule::constant(20.0), 0.0, 0.0), DomainError);
  g.k_th = 0.0;
  CHECK_THROWS_AS(conduction_step(g, FiringSchedule::constant(20.0), 0.0, 1.0), NumericalError);
  CHECK_THROWS_AS(dense_grid(0.01, 2, 20.0), ConfigError);
}

TEST_CASE("equilibrium is preserved") {
  ThermalGrid g = dense_grid(0.01, 17, 345.0);
  const FiringSchedule faces = FiringSchedule::constant(345.0);
  for (int k = 0; k < 50; ++k) g = conduction_step(g, faces, k * 3.0, 3.0);
  for (double T : g.T) REQUIRE(std::abs(T - 345.0) <= 1e-12 * 345.0);
}

TEST_CASE("steady state is linear") {
  ThermalGrid g = dense_grid(0.01, 21, 20.0);
  const FiringSchedule left = FiringSchedule::constant(100.0);
  const FiringSchedule right = FiringSchedule::constant(500.0);
  for (int k = 0; k < 40; ++k) g = conduction_step(g, left, right, k * 1e5, 1e5);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double linear = 100.0 + 400.0 * i / (g.n_nodes() - 1);
    REQUIRE(std::abs(g.T[i] - linear) <= 1e-10 * 400.0);
  }
}

TEST_CASE("step response matches the Fourier series") {
  const ThermalGrid probe = dense_grid(0.02, 100, 20.0);
  const double kappa = diffusivity(probe);
  const double t_end = 0.05 * 0.02 * 0.02 / kappa;
  const ThermalGrid g = run_step_response(100, t_end, 4000);
  double err = 0.0, ref = 0.0;
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double x = i * g.spacing();
    const double exact = step_response(x, t_end, 0.02, kappa, 20.0, 120.0);
    err += (g.T[i] - exact) * (g.T[i] - exact);
    ref += (exact - 120.0) * (exact - 120.0);
  }
  const double rel = std::sqrt(err / ref);
  MESSAGE("L2 relative error " << rel);
  CHECK(rel < 1e-2);
}

TEST_CASE("spatial convergence order") {
  const double kappa = diffusivity(dense_grid(0.02, 11, 20.0));
  const double t_end = 0.05 * 0.02 * 0.02 / kappa;
  const double a = run_step_response(11, t_end, 2000).T[5];
  const double b = run_step_response(21, t_end, 2000).T[10];
  const double c = run_step_response(41, t_end, 2000).T[20];
  const double order = std::log2(std::abs(b - a) / std::abs(c - b));
  MESSAGE("observed order " << order);
  CHECK(order >= 1.8);
}

TEST_CASE("property: discrete maximum principle") {
  testsupport::Gen gen(52);
  for (int trial = 0; trial < 50; ++trial) {
    ThermalGrid g = dense_grid(gen.uniform(0.005, 0.05), gen.integer(3, 40), 0.0);
    for (double& T : g.T) T = gen.uniform(0.0, 1000.0);
    for (double& r : g.rho_hat) r = gen.uniform(0.4, 1.0);
    const double lo0 = *std::min_element(g.T.begin(), g.T.end());
    const double hi0 = *std::max_element(g.T.begin(), g.T.end());
    const double a = gen.uniform(0.0, 1200.0), b = gen.uniform(0.0, 1200.0);
    const double lo = std::min({lo0, a, b}), hi = std::max({hi0, a, b});
    const FiringSchedule left = FiringSchedule::constant(a), right = FiringSchedule::constant(b);
    for (int k = 0; k < 20; ++k) {
      const double dt = std::pow(10.0, gen.uniform(-2, 4));
      g = conduction_step(g, left, right, 0.0, dt);
      for (double T : g.T) REQUIRE((T >= lo - 1e-9 && T <= hi + 1e-9));
    }
  }
}

TEST_CASE("energy balance") {
  ThermalGrid g = dense_grid(0.03, 31, 20.0);
  for (int i = 0; i < g.n_nodes(); ++i) g.rho_hat[i] = 0.5 + 0.4 * i / 30.0;
  const FiringSchedule left({{0.0, 20.0}, {600.0, 900.0}});
  const FiringSchedule right({{0.0, 20.0}, {300.0, 400.0}, {900.0, 1000.0}});
  const double H0 = interior_enthalpy(g);
  double inflow = 0.0;
  for (int k = 0; k < 120; ++k) {
    const ThermalGrid next = conduction_step(g, left, right, k * 10.0, 10.0);
    inflow += boundary_heat_input(next, 10.0);
    g = next;
  }
  const double change = interior_enthalpy(g) - H0;
  CHECK(std::abs(change - inflow) <= 1e-8 * std::abs(change));
}

TEST_CASE("uniform column stays uniform") {
  MaterialParams p;
  ColumnSpec spec;
  spec.n_nodes = 5;
  spec.T_initial = 1100.0;
  spec.duration = 300.0;
  const ColumnResult run = coupled_column_run(p, spec, FiringSchedule::constant(1100.0), {});
  REQUIRE(run.times.size() == 31);
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const TimeSeriesRecord& r0 = run.node_records[0][k];
    for (int i = 1; i < spec.n_nodes; ++i) {
      const TimeSeriesRecord& r = run.node_records[i][k];
      REQUIRE(std::abs(r.T_C - r0.T_C) <= 1e-12);
      REQUIRE(std::abs(r.rho_hat - r0.rho_hat) <= 1e-12);
      REQUIRE(std::abs(r.R_grain_m - r0.R_grain_m) <= 1e-12 * r0.R_grain_m);
    }
  }
  CHECK(run.node_records[2].back().rho_hat > p.rho_hat0);
}

TEST_CASE("column is mirror symmetric and the surface leads the core") {
  MaterialParams p;
  ColumnSpec spec;
  spec.length = 0.05;
  spec.n_nodes = 3;
  spec.dt = 5.0;
  spec.mech_max_dt = 5.0;
  const FiringSchedule fast({{0.0, 20.0}, {354.0, 1200.0}, {1500.0, 1200.0}});
  const ColumnResult run = coupled_column_run(p, spec, fast, {});
  const auto& surface = run.node_records[0];
  const auto& core = run.node_records[1];
  const auto& other = run.node_records[2];
  bool lag_seen = false;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    REQUIRE(std::abs(surface[k].rho_hat - other[k].rho_hat) <= 1e-12);
    REQUIRE(surface[k].T_C >= core[k].T_C);
    REQUIRE(surface[k].rho_hat >= core[k].rho_hat);
    if (surface[k].rho_hat > core[k].rho_hat + 1e-6) lag_seen = true;
  }
  CHECK(lag_seen);
  auto onset = [&](const std::vector<TimeSeriesRecord>& recs) {
    for (const TimeSeriesRecord& r : recs) {
      if (r.rho_hat - p.rho_hat0 > 1e-5) return r.time_s;
    }
    return 1e300;
  };
  CHECK(onset(surface) < onset(core));
  CHECK(core.back().rho_hat > p.rho_hat0);
}

TEST_CASE("high conductivity gives the lumped limit") {
  MaterialParams p;
  p.k_th = 1e6;
  ColumnSpec spec;
  const FiringSchedule ramp({{0.0, 20.0}, {2360.0, 1200.0}});
  const ColumnResult run = coupled_column_run(p, spec, ramp, {});
  double spread = 0.0;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    double lo = 1.0, hi = 0.0;
    for (const auto& node : run.node_records) {
      lo = std::min(lo, node[k].rho_hat);
      hi = std::max(hi, node[k].rho_hat);
    }
    spread = std::max(spread, hi - lo);
  }
  MESSAGE("max density spread " << spread);
  CHECK(spread < 1e-6);
  CHECK(run.node_records[5].back().rho_hat > p.rho_hat0);
}
