#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "lgf/config.hpp"
#include "lgf/diagnostics.hpp"
#include "lgf/dynamics.hpp"
#include "lgf/errors.hpp"
#include "lgf/run.hpp"
#include "lgf/verification.hpp"

using namespace lgf;

namespace {

constexpr double kPi = std::numbers::pi;

Model test_model(double mu = 0.1, double lambda = 0.0) {
  return {EosParams(1.0, 1.0, 2.0, 0.0, 1.0, 1.0), ViscosityParams(mu, lambda)};
}

FlowState random_state(const Grid& g, const EosParams& eos, std::uint64_t seed) {
  IcConfig ic{"random_modes", {{"m_amp", 0.3}, {"n_amp", 0.2}, {"u_amp", 0.4}}};
  return make_initial_state(g, eos, ic, seed);
}

double max_abs(const ScalarField& f) {
  double v = 0.0;
  for (double x : f.values()) v = std::max(v, std::abs(x));
  return v;
}

std::string base_config(const std::string& extra) {
  return "grid.dim = 1\ngrid.N = 64\ngrid.L = 10\n"
         "eos.a_l = 1\neos.a_g = 1\neos.rho_l0 = 2\neos.P_l0 = 0\n"
         "eos.m_tilde = 1\neos.n_tilde = 1\nvisc.mu = 0.1\nvisc.lambda = 0\n" +
         extra;
}

}  // namespace

TEST_CASE("equilibrium is a fixed point of the rhs") {
  const auto model = test_model();
  for (int dim : {1, 3}) {
    for (auto kind : {SchemeKind::spectral, SchemeKind::central2, SchemeKind::central4}) {
      const Grid g(dim, 16, 4.0);
      const Operators ops(g, Scheme{kind});
      const auto s = make_initial_state(g, model.eos, IcConfig{}, 0);
      const auto r = rhs(s, model, ops);
      CHECK(max_abs(r.dm_dt) <= 1e-12);
      CHECK(max_abs(r.dn_dt) <= 1e-12);
      CHECK(r.du_dt.max_abs() <= 1e-12);
    }
  }
}

TEST_CASE("at rest the velocity responds to the pressure gradient only") {
  const auto model = test_model();
  const Grid g(3, 16, 2 * kPi);
  const Operators ops(g, Scheme{});
  FlowState s{ScalarField(g), ScalarField(g), VectorField(g), 0.0};
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto x = g.position(i);
    s.m[i] = 1.0 + 0.2 * std::sin(x[0]) * std::cos(x[1]);
    s.n[i] = 0.8 + 0.1 * std::cos(x[2] + x[0]);
  }
  const auto r = rhs(s, model, ops);
  CHECK(max_abs(r.dm_dt) == 0.0);
  CHECK(max_abs(r.dn_dt) == 0.0);

  ScalarField p(g);
  for (std::size_t i = 0; i < g.points(); ++i) p[i] = pressure(s.m[i], s.n[i], model.eos);
  const auto gp = ops.grad(p);
  for (int d = 0; d < 3; ++d) {
    const auto du = r.du_dt.component(d);
    const auto gd = gp.component(d);
    for (std::size_t i = 0; i < g.points(); ++i) {
      REQUIRE(du[i] == doctest::Approx(-gd[i] / s.m[i]).epsilon(1e-12).scale(1e-12));
    }
  }
}

TEST_CASE("mass rates integrate to zero") {
  const auto model = test_model();
  for (int dim : {1, 3}) {
    for (auto kind : {SchemeKind::spectral, SchemeKind::central2, SchemeKind::central4}) {
      const Grid g(dim, 16, 3.0);
      const Operators ops(g, Scheme{kind});
      const auto s = random_state(g, model.eos, 42);
      const auto r = rhs(s, model, ops);
      const double scale_m = g.volume() * max_abs(r.dm_dt);
      const double scale_n = g.volume() * max_abs(r.dn_dt);
      CHECK(std::abs(integrate(r.dm_dt)) <= 1e-12 * scale_m);
      CHECK(std::abs(integrate(r.dn_dt)) <= 1e-12 * scale_n);
    }
  }
}

TEST_CASE("positivity is enforced") {
  const auto model = test_model();
  const Grid g(1, 16, 1.0);
  const Operators ops(g, Scheme{});
  auto s = make_initial_state(g, model.eos, IcConfig{}, 0);
  s.n[5] = 1e-9;
  CHECK_THROWS_AS(rhs(s, model, ops), PositivityLoss);
  try {
    check_positivity(s, 1e-8);
  } catch (const PositivityLoss& e) {
    CHECK(e.field() == "n");
    CHECK(e.index() == 5);
  }
  s.n[5] = 1.0;
  s.m[3] = std::nan("");
  CHECK_THROWS_AS(rhs(s, model, ops), NumericalFailure);
}

TEST_CASE("time step bounds") {
  const auto model = test_model(0.5);
  IntegratorSettings settings;
  const Grid g(1, 64, 10.0);
  const auto eq = make_initial_state(g, model.eos, IcConfig{}, 0);
  const auto b = cfl_bounds(eq, model);
  CHECK(b.viscous < b.advective);
  CHECK(cfl_dt(eq, model, settings) == doctest::Approx(settings.cfl * b.viscous).epsilon(1e-15));

  const auto b2 = cfl_bounds(make_initial_state(Grid(1, 128, 10.0), model.eos, IcConfig{}, 0), model);
  CHECK(b2.advective == doctest::Approx(0.5 * b.advective).epsilon(1e-14));
  CHECK(b2.viscous == doctest::Approx(0.25 * b.viscous).epsilon(1e-14));

  // Scalar recomputation of both bounds on a random 3D state.
  const Grid g3(3, 16, 5.0);
  const auto s = random_state(g3, model.eos, 9);
  double c2 = 0.0, umax = 0.0, mmin = 1e300;
  for (std::size_t i = 0; i < g3.points(); ++i) {
    const auto pg = pressure_grad(s.m[i], s.n[i], model.eos);
    c2 = std::max(c2, pg.dm + s.n[i] / s.m[i] * pg.dn);
    double u2 = 0.0;
    for (int d = 0; d < 3; ++d) u2 += s.u.component(d)[i] * s.u.component(d)[i];
    umax = std::max(umax, std::sqrt(u2));
    mmin = std::min(mmin, s.m[i]);
  }
  const double h = g3.spacing();
  const double adv = h / (umax + std::sqrt(c2));
  const double visc = h * h * mmin / (2.0 * 3.0 * model.visc.longitudinal());
  const double dt = cfl_dt(s, model, settings);
  CHECK(dt <= settings.cfl * adv * (1 + 1e-14));
  CHECK(dt <= settings.cfl * visc * (1 + 1e-14));
  CHECK(dt == doctest::Approx(settings.cfl * std::min(adv, visc)).epsilon(1e-14));
  settings.dt_max = 1e-6;
  CHECK(cfl_dt(s, model, settings) == 1e-6);
}

TEST_CASE("integrator settings validation") {
  IntegratorSettings s;
  CHECK_NOTHROW(s.validate());
  s.cfl = 1.5;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = {};
  s.positivity_floor = 0.0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  CHECK(method_from_string("ssprk3") == Method::ssprk3);
  CHECK_THROWS_AS(method_from_string("euler"), ParameterError);
}

TEST_CASE("a step from equilibrium returns equilibrium") {
  const auto model = test_model();
  for (auto method : {Method::rk4, Method::ssprk3}) {
    const Grid g(3, 16, 4.0);
    const Operators ops(g, Scheme{});
    IntegratorSettings settings;
    settings.method = method;
    const auto s = make_initial_state(g, model.eos, IcConfig{}, 0);
    const auto next = step(s, 0.01, model, ops, settings);
    CHECK(next.t == doctest::Approx(0.01));
    CHECK(max_abs(next.m - s.m) <= 1e-14);
    CHECK(max_abs(next.n - s.n) <= 1e-14);
    CHECK(next.u.max_abs() <= 1e-14);
    CHECK_THROWS_AS(step(s, 0.0, model, ops, settings), ParameterError);
  }
}

TEST_CASE("linear acoustic mode oscillates at the linearized frequency") {
  // Linearization about (m~, n~, 0) for a mode exp(i k x):
  //   d/dt (m, n, u) = A (m, n, u).
  const auto model = test_model(0.05);
  const double mt = model.eos.m_tilde(), nt = model.eos.n_tilde();
  const auto pg = pressure_grad(mt, nt, model.eos);
  const double L = 2 * kPi, k = 1.0;
  const std::complex<double> ik(0.0, k);
  Eigen::Matrix3cd A;
  A << 0.0, 0.0, -ik * mt,  //
      0.0, 0.0, -ik * nt,   //
      -ik * pg.dm / mt, -ik * pg.dn / mt, -model.visc.longitudinal() * k * k / mt;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(A);
  double omega = 0.0;
  for (int i = 0; i < 3; ++i) omega = std::max(omega, std::abs(solver.eigenvalues()[i].imag()));
  REQUIRE(omega > 0.0);

  const double eps = 1e-6;
  const Grid g(1, 32, L);
  const Operators ops(g, Scheme{});
  IcConfig ic{"fourier_mode", {{"m_amp", eps * mt}, {"n_amp", eps * nt}}};
  auto s = make_initial_state(g, model.eos, ic, 0);
  IntegratorSettings settings;
  const double dt = 0.005;
  const std::size_t probe = 8;  // x = pi / 2, where sin(k x) = 1
  std::vector<double> crossings;
  double prev = s.u.component(0)[probe];
  for (int i = 0; i < 4000; ++i) {
    const double t0 = s.t;
    s = step(s, dt, model, ops, settings);
    const double cur = s.u.component(0)[probe];
    if (i > 0 && ((prev < 0.0) != (cur < 0.0))) crossings.push_back(t0 + dt * prev / (prev - cur));
    prev = cur;
  }
  REQUIRE(crossings.size() >= 4);
  const double half_period = (crossings.back() - crossings.front()) / (crossings.size() - 1);
  const double measured = kPi / half_period;
  CHECK(std::abs(measured - omega) <= 0.02 * omega);
}

TEST_CASE("initial condition recipes") {
  const auto model = test_model();
  const Grid g(1, 32, 10.0);
  CHECK_THROWS_AS(make_initial_state(g, model.eos, IcConfig{"vortex", {}}, 0), ParameterError);
  CHECK_THROWS_AS(make_initial_state(g, model.eos, IcConfig{"gaussian_bump", {{"amp", 1.0}}}, 0),
                  ParameterError);

  const EosParams eos(1.0, 1.0, 2.0, 0.0, 1.0, 2.5);
  const auto cr = make_initial_state(g, eos, IcConfig{"constant_ratio_bump", {{"amp", 0.2}}}, 0);
  for (std::size_t i = 0; i < g.points(); ++i) {
    CHECK(cr.n[i] / cr.m[i] == doctest::Approx(2.5).epsilon(1e-15));
  }
  const auto a = random_state(g, eos, 1);
  const auto b = random_state(g, eos, 1);
  const auto c = random_state(g, eos, 2);
  CHECK(max_abs(a.m - b.m) == 0.0);
  CHECK(max_abs(a.m - c.m) > 0.0);
}

TEST_CASE("run: t_end = 0 emits one record") {
  const auto cfg = parse_config(base_config("integrator.t_end = 0\n"));
  const auto r = run(cfg);
  CHECK(r.records.size() == 1);
  CHECK(r.records[0].t == 0.0);
  CHECK(r.steps == 0);
}

TEST_CASE("run: equilibrium energy stays zero") {
  const auto cfg = parse_config(base_config("integrator.t_end = 2\noutput.record_every = 1\n"));
  const auto r = run(cfg);
  CHECK(r.records.size() == r.steps + 1);
  for (const auto& rec : r.records) REQUIRE(std::abs(rec.E) <= 1e-13);
  CHECK(r.final_state.t == 2.0);
}

TEST_CASE("run: masses are conserved for a smooth perturbation") {
  auto cfg = parse_config(base_config(
      "integrator.t_end = 1\nic.recipe = gaussian_bump\nic.m_amp = 0.1\nic.n_amp = 0.05\n"
      "ic.u_amp = 0.05\n"));
  cfg.grid = Grid(1, 256, 10.0);
  const auto r = run(cfg);
  const auto& f = r.records.front();
  const auto& l = r.records.back();
  CHECK(std::abs(l.mass_m - f.mass_m) <= 1e-12 * f.mass_m);
  CHECK(std::abs(l.mass_n - f.mass_n) <= 1e-12 * f.mass_n);
  CHECK(l.t == 1.0);
}

TEST_CASE("run: snapshot times are hit exactly") {
  const auto cfg = parse_config(base_config(
      "integrator.t_end = 1\noutput.snapshot_times = 0, 0.3, 0.7\n"
      "ic.recipe = gaussian_bump\nic.m_amp = 0.1\n"));
  std::vector<std::pair<double, std::size_t>> seen;
  RunSinks sinks;
  sinks.on_snapshot = [&](const FlowState& s, std::size_t i) { seen.emplace_back(s.t, i); };
  run(cfg, sinks);
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == std::pair{0.0, std::size_t{0}});
  CHECK(seen[1] == std::pair{0.3, std::size_t{1}});
  CHECK(seen[2] == std::pair{0.7, std::size_t{2}});
}

TEST_CASE("run: positivity failure carries step and time") {
  const auto cfg = parse_config(
      "grid.dim = 1\ngrid.N = 64\ngrid.L = 10\n"
      "eos.a_l = 1\neos.a_g = 1\neos.rho_l0 = 2\neos.P_l0 = 0\n"
      "eos.m_tilde = 1\neos.n_tilde = 1\nvisc.mu = 0.01\nvisc.lambda = 0\n"
      "integrator.t_end = 1\nic.recipe = gaussian_bump\nic.m_amp = -0.5\nic.u_amp = 4\n");
  try {
    run(cfg);
    FAIL("expected a positivity failure");
  } catch (const PositivityLoss& e) {
    const std::string msg = e.what();
    CHECK(msg.find("step ") != std::string::npos);
    CHECK(msg.find("t=") != std::string::npos);
  }
}
