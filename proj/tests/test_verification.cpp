#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lgf/errors.hpp"
#include "lgf/verification.hpp"

using namespace lgf;

namespace {

constexpr double kPi = std::numbers::pi;

Model test_model() { return {EosParams(1.0, 1.0, 2.0, 0.0, 1.0, 1.0), ViscosityParams(0.3, 0.1)}; }

using Point = std::array<double, 3>;

/// Fourth-order central difference of g along direction e with step h.
template <class G>
double fd(const G& g, double h) {
  return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}

/// Residual of the forced system evaluated with finite differences of the
/// analytic fields only (values from evaluate(), P from the EOS).
MmsSolution::Sources fd_sources(const MmsCase& c, const Model& model, const Point& x, double t) {
  const double L = c.length;
  const int dim = c.dim;
  auto val = [&](const TrigSum& f, const Point& y, double s) { return evaluate(f, y, s, L).value; };
  auto shifted = [](Point y, int d, double h) {
    y[d] += h;
    return y;
  };
  const double h = 1e-3;
  MmsSolution::Sources out{};

  auto d_dt = [&](const auto& q) { return fd([&](double e) { return q(x, t + e); }, h); };
  auto d_dx = [&](const auto& q, int d, const Point& y) {
    return fd([&](double e) { return q(shifted(y, d, e), t); }, h);
  };

  auto flux = [&](const TrigSum& rho, int d) {
    return [&, d](const Point& y, double s) { return val(rho, y, s) * val(c.u[d], y, s); };
  };
  auto m_of = [&](const Point& y, double s) { return val(c.m, y, s); };
  auto n_of = [&](const Point& y, double s) { return val(c.n, y, s); };
  out.m = d_dt(m_of);
  out.n = d_dt(n_of);
  for (int d = 0; d < dim; ++d) {
    out.m += d_dx(flux(c.m, d), d, x);
    out.n += d_dx(flux(c.n, d), d, x);
  }
  auto p_of = [&](const Point& y, double s) {
    return pressure(val(c.m, y, s), val(c.n, y, s), model.eos);
  };
  const double mu = model.visc.mu(), lam = model.visc.lambda();
  for (int j = 0; j < dim; ++j) {
    auto uj = [&, j](const Point& y, double s) { return val(c.u[j], y, s); };
    double acc = d_dt(uj);
    double lap = 0.0, grad_div = 0.0;
    for (int d = 0; d < dim; ++d) {
      acc += val(c.u[d], x, t) * d_dx(uj, d, x);
      lap += fd([&](double e) { return d_dx(uj, d, shifted(x, d, e)); }, h);
      auto ud = [&, d](const Point& y, double s) { return val(c.u[d], y, s); };
      grad_div += fd([&](double e) { return d_dx(ud, d, shifted(x, j, e)); }, h);
    }
    acc -= (mu * lap + (mu + lam) * grad_div - d_dx(p_of, j, x)) / val(c.m, x, t);
    out.u[j] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("trigonometric sums: derivatives against finite differences") {
  TrigSum f{0.5, {{{1, 2, 0}, 0.3, 0.7, 0.2}, {{0, 1, -1}, -0.1, 1.3, 1.0}}};
  const double L = 3.0;
  const Point x{0.4, 1.1, 2.3};
  const double t = 0.37;
  const auto e = evaluate(f, x, t, L);
  auto at = [&](Point y, double s) { return evaluate(f, y, s, L).value; };
  CHECK(e.dt == doctest::Approx(fd([&](double h) { return at(x, t + h); }, 1e-3)).epsilon(1e-9));
  for (int d = 0; d < 3; ++d) {
    auto along = [&](double h) {
      Point y = x;
      y[d] += h;
      return at(y, t);
    };
    CHECK(e.grad[d] == doctest::Approx(fd(along, 1e-3)).epsilon(1e-9));
    for (int k = 0; k < 3; ++k) {
      auto mixed = [&](double h) {
        Point y = x;
        y[k] += h;
        return evaluate(f, y, t, L).grad[d];
      };
      CHECK(std::abs(e.hess[d][k] - fd(mixed, 1e-3)) <= 1e-8);
    }
  }
}

TEST_CASE("manufactured sources against a finite-difference residual") {
  const auto model = test_model();
  for (int dim : {1, 3}) {
    const auto c = standard_mms_case(dim, 2 * kPi, model.eos, 0.1);
    const MmsSolution mms(c, model);
    for (const Point& x : {Point{0.3, 1.7, 4.1}, Point{5.0, 0.2, 2.9}}) {
      for (double t : {0.0, 0.35}) {
        const auto s = mms.sources_at(x, t);
        const auto o = fd_sources(c, model, x, t);
        CHECK(s.m == doctest::Approx(o.m).epsilon(1e-7).scale(1e-7));
        CHECK(s.n == doctest::Approx(o.n).epsilon(1e-7).scale(1e-7));
        for (int d = 0; d < dim; ++d) {
          CHECK(s.u[d] == doctest::Approx(o.u[d]).epsilon(1e-7).scale(1e-7));
        }
      }
    }
  }
}

TEST_CASE("zero-amplitude case has no sources") {
  const auto model = test_model();
  const MmsSolution mms(standard_mms_case(3, 2 * kPi, model.eos, 0.0), model);
  const auto s = mms.sources_at({0.1, 0.2, 0.3}, 0.4);
  CHECK(s.m == 0.0);
  CHECK(s.n == 0.0);
  for (double v : s.u) CHECK(v == 0.0);
}

TEST_CASE("advected densities in a uniform flow need no mass sources") {
  const auto model = test_model();
  const double c = 0.4;
  MmsCase mc;
  mc.dim = 3;
  mc.m = {model.eos.m_tilde(), {{{1, 0, 0}, 0.1, c, 0.3}}};
  mc.n = {model.eos.n_tilde(), {{{1, 0, 0}, 0.05, c, 1.1}}};
  mc.u[0] = {c, {}};
  const MmsSolution mms(mc, model);
  for (const Point& x : {Point{0.3, 1.7, 4.1}, Point{5.0, 0.2, 2.9}}) {
    const auto s = mms.sources_at(x, 0.8);
    CHECK(std::abs(s.m) <= 1e-15);
    CHECK(std::abs(s.n) <= 1e-15);
  }
}

TEST_CASE("amplitude guard") {
  const auto model = test_model();
  CHECK_THROWS_AS(MmsSolution(standard_mms_case(1, 2 * kPi, model.eos, 5.0), model), ParameterError);
}

TEST_CASE("discrete rhs on analytic fields reproduces the sources at scheme order") {
  const auto model = test_model();
  const auto c = standard_mms_case(1, 2 * kPi, model.eos, 0.1);
  const MmsSolution mms(c, model);
  for (auto [kind, expected] : {std::pair{SchemeKind::central2, 2.0}, std::pair{SchemeKind::central4, 4.0}}) {
    std::vector<double> hs, es;
    for (int n : {32, 64, 128}) {
      const Grid g(1, n, c.length);
      const Operators ops(g, Scheme{kind});
      const auto s = mms.exact(g, 0.0);
      const auto forcing = mms.forcing(g);
      const auto r = rhs(s, model, ops, 1e-8, &forcing);
      double err = 0.0;
      for (std::size_t i = 0; i < g.points(); ++i) {
        const auto x = g.position(i);
        err = std::max(err, std::abs(r.dm_dt[i] - evaluate(c.m, x, 0.0, c.length).dt));
        err = std::max(err, std::abs(r.dn_dt[i] - evaluate(c.n, x, 0.0, c.length).dt));
        err = std::max(err, std::abs(r.du_dt.component(0)[i] - evaluate(c.u[0], x, 0.0, c.length).dt));
      }
      hs.push_back(g.spacing());
      es.push_back(err);
    }
    CHECK(fit_order(hs, es) == doctest::Approx(expected).epsilon(0.3 / expected));
  }
}

TEST_CASE("convergence studies") {
  const auto model = test_model();
  const MmsSolution mms(standard_mms_case(1, 2 * kPi, model.eos, 0.1), model);

  const std::vector<StudyLevel> space{{32, 4e-3}, {64, 1e-3}, {128, 2.5e-4}};
  const auto rs = convergence_study(mms, space, Scheme{SchemeKind::central2}, Method::rk4,
                                    RefinementAxis::space, 0.1, 2.0, 0.2);
  for (double o : rs.order_l2) CHECK(o == doctest::Approx(2.0).epsilon(0.1));
  CHECK(rs.pass());

  // N = 64 and mu = 0.05: spatial floor near 1e-14, all dt rk4-stable.
  const Model slow{model.eos, ViscosityParams(0.05, 0.0)};
  const MmsSolution mms_t(standard_mms_case(1, 2 * kPi, slow.eos, 0.1), slow);
  const std::vector<StudyLevel> time{{64, 0.05}, {64, 0.025}, {64, 0.0125}, {64, 0.00625}};
  const auto rt = convergence_study(mms_t, time, Scheme{}, Method::rk4, RefinementAxis::time, 0.1,
                                    4.0, 0.3);
  for (double o : rt.order_l2) CHECK(o == doctest::Approx(4.0).epsilon(0.075));
  CHECK(rt.pass());

  const auto r3 = convergence_study(mms_t, time, Scheme{}, Method::ssprk3, RefinementAxis::time, 0.1,
                                    3.0, 0.3);
  for (double o : r3.order_l2) CHECK(o == doctest::Approx(3.0).epsilon(0.1));

  const auto again = convergence_study(mms_t, time, Scheme{}, Method::rk4, RefinementAxis::time, 0.1,
                                       4.0, 0.3);
  std::ostringstream a, b;
  write_report_csv(a, rt);
  write_report_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("axis,scheme,method,field,n,h,dt,err_l2,err_linf\n", 0) == 0);
  CHECK(a.str().find("# summary order_l2_m=") != std::string::npos);

  const auto wrong = convergence_study(mms_t, time, Scheme{}, Method::rk4, RefinementAxis::time, 0.1,
                                       2.0, 0.3);
  CHECK_FALSE(wrong.pass());
  CHECK_THROWS_AS(convergence_study(mms, std::span(time).first(2), Scheme{}, Method::rk4,
                                    RefinementAxis::time, 0.1, 4.0, 0.3),
                  ParameterError);
}

TEST_CASE("EOS property sweep") {
  const EosParams p(1.0, 1.0, 1.0, 0.0, 1.0, 1.0);
  const auto report = eos_property_sweep(p);
  CHECK(report.points_checked == 64 * 64);
  CHECK(report.violations.empty());
  CHECK(report.max_fd_rel_error <= kFdRelTolerance);
  CHECK(report.blowup_slope == doctest::Approx(-1.5).epsilon(0.1 / 1.5));
  CHECK(report.pass());
  CHECK(eos_property_sweep(EosParams(1.3, 0.4, 2.0, 0.5, 1.1, 0.3)).pass());

  auto mutated = EosFunctions::from(p);
  mutated.grad = [&](double m, double n) {
    auto g = pressure_grad(m, n, p);
    g.dm = -g.dm;
    return g;
  };
  const auto bad = eos_property_sweep(p, {}, &mutated);
  CHECK_FALSE(bad.pass());
  REQUIRE_FALSE(bad.violations.empty());
  bool saw_sign = false;
  for (const auto& v : bad.violations) {
    if (v.check.find("P_m") != std::string::npos) saw_sign = true;
  }
  CHECK(saw_sign);
}
