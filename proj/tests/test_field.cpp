#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "lgf/errors.hpp"
#include "lgf/field.hpp"
#include "lgf/ops.hpp"

using namespace lgf;

namespace {

constexpr double kPi = std::numbers::pi;
using Fn = std::function<double(const std::array<double, 3>&)>;

ScalarField sample(const Grid& g, const Fn& f) {
  ScalarField out(g);
  for (std::size_t i = 0; i < g.points(); ++i) out[i] = f(g.position(i));
  return out;
}

VectorField sample(const Grid& g, const std::array<Fn, 3>& f) {
  VectorField out(g);
  for (int d = 0; d < g.dim(); ++d) out.set_component(d, sample(g, f[d]));
  return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

double max_diff(const VectorField& a, const VectorField& b) { return (a - b).max_abs(); }

ScalarField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(g);
  for (auto& v : f.values()) v = dist(rng);
  return f;
}

/// Shift by one grid point along axis 0.
ScalarField shift(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const std::size_t s = g.stride(0);
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto idx = g.unflatten(i);
    const std::size_t src = idx[0] == 0 ? i + (g.n() - 1) * s : i - s;
    out[i] = f[src];
  }
  return out;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

TEST_CASE("grid validation and geometry") {
  CHECK_THROWS_AS(Grid(2, 16, 1.0), ParameterError);
  CHECK_THROWS_AS(Grid(1, 4, 1.0), ParameterError);
  CHECK_THROWS_AS(Grid(1, 16, 0.0), ParameterError);
  const Grid g(3, 8, 2.0);
  CHECK(g.points() == 512);
  CHECK(g.spacing() == 0.25);
  CHECK(g.volume() == doctest::Approx(8.0));
  CHECK(g.cell_volume() == doctest::Approx(0.015625));
  const auto idx = g.unflatten(1 * 64 + 2 * 8 + 3);
  CHECK(idx == std::array<int, 3>{1, 2, 3});
  CHECK(g.position(1 * 64 + 2 * 8 + 3)[2] == 0.75);
  CHECK_THROWS_AS(Operators(Grid(1, 8, 1.0), Scheme{SchemeKind::central4}), ParameterError);
}

TEST_CASE("integrate") {
  const Grid g3(3, 16, 3.0);
  CHECK(integrate(ScalarField(g3, 2.5)) == doctest::Approx(2.5 * 27.0).epsilon(1e-15));
  const Grid g1(1, 64, 5.0);
  const auto s = sample(g1, [](const auto& x) { return std::sin(2 * kPi * x[0] / 5.0); });
  CHECK(std::abs(integrate(s)) <= 1e-12);

  // Neumaier-compensated long double summation as the oracle.
  const auto r = random_field(g3, 3);
  long double sum = 0.0L, comp = 0.0L;
  for (double v : r.values()) {
    const long double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  const double oracle = static_cast<double>((sum + comp) * g3.cell_volume());
  CHECK(std::abs(integrate(r) - oracle) <= 1e-13 * std::abs(oracle));
}

TEST_CASE("operators annihilate constants") {
  for (auto kind : {SchemeKind::spectral, SchemeKind::central2, SchemeKind::central4}) {
    const Grid g(3, 16, 2.0);
    const Operators ops(g, Scheme{kind});
    const ScalarField c(g, 3.7);
    CHECK(ops.grad(c).max_abs() <= 1e-13);
    CHECK(ops.laplacian(c).max_abs() <= 1e-13);
    CHECK(ops.div(VectorField(g, -1.25)).max_abs() <= 1e-13);
  }
}

TEST_CASE("spectral derivatives of a sine mode") {
  const double L = 3.0;
  const Grid g(1, 32, L);
  const Operators ops(g, Scheme{});
  const double k = 2 * kPi / L;
  const auto f = sample(g, [&](const auto& x) { return std::sin(k * x[0]); });
  const auto df = sample(g, [&](const auto& x) { return k * std::cos(k * x[0]); });
  CHECK(max_diff(ops.grad(f).component_field(0), df) <= 1e-12 * k);
  CHECK(max_diff(ops.laplacian(f), -k * k * f) <= 1e-12 * k * k);
  CHECK(max_diff(ops.div(ops.grad(f)), ops.laplacian(f)) <= 1e-12 * k * k);
}

TEST_CASE("spectral identities in 3D") {
  const Grid g(3, 16, 2 * kPi);
  const Operators ops(g, Scheme{});
  const auto phi = sample(g, [](const auto& x) {
    return std::sin(x[0]) * std::cos(2 * x[1]) + std::cos(x[2] - x[0]);
  });
  const double scale = ops.laplacian(phi).max_abs();
  CHECK(max_diff(ops.div(ops.grad(phi)), ops.laplacian(phi)) <= 1e-12 * scale);

  const auto w = ops.antisym_grad(ops.grad(phi));
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) CHECK(w(j, k).max_abs() <= 1e-12);
  }

  // u = (sin x1, sin x2, sin x0)
  const auto u = sample(g, std::array<Fn, 3>{[](const auto& x) { return std::sin(x[1]); },
                                             [](const auto& x) { return std::sin(x[2]); },
                                             [](const auto& x) { return std::sin(x[0]); }});
  const auto om = ops.antisym_grad(u);
  CHECK(max_diff(om(0, 1), sample(g, [](const auto& x) { return std::cos(x[1]); })) <= 1e-12);
  CHECK(max_diff(om(0, 2), sample(g, [](const auto& x) { return -std::cos(x[0]); })) <= 1e-12);
  CHECK(max_diff(om(1, 2), sample(g, [](const auto& x) { return std::cos(x[2]); })) <= 1e-12);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const auto a = om(j, k).values();
      const auto b = om(k, j).values();
      for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == -b[i]);
    }
  }
}

TEST_CASE("central schemes: observed order on a sine") {
  const double L = 2.0;
  const double k = 2 * kPi / L;
  for (auto [kind, expected, tol] :
       {std::tuple{SchemeKind::central2, 2.0, 0.1}, std::tuple{SchemeKind::central4, 4.0, 0.2}}) {
    std::vector<double> hs, eg, el;
    for (int n : {32, 64, 128}) {
      const Grid g(1, n, L);
      const Operators ops(g, Scheme{kind});
      const auto f = sample(g, [&](const auto& x) { return std::sin(k * x[0]); });
      const auto df = sample(g, [&](const auto& x) { return k * std::cos(k * x[0]); });
      hs.push_back(g.spacing());
      eg.push_back(max_diff(ops.grad(f).component_field(0), df));
      el.push_back(max_diff(ops.laplacian(f), -k * k * f));
    }
    CHECK(fitted_order(hs, eg) == doctest::Approx(expected).epsilon(tol / expected));
    CHECK(fitted_order(hs, el) == doctest::Approx(expected).epsilon(tol / expected));
  }
}

TEST_CASE("central2 divergence of a 3D field converges at second order") {
  const std::array<Fn, 3> v{[](const auto& x) { return std::sin(x[0] + x[1]); },
                            [](const auto& x) { return std::cos(x[1]) * std::sin(x[2]); },
                            [](const auto& x) { return std::sin(x[2]) + std::cos(x[0]); }};
  const Fn div_v = [](const auto& x) {
    return std::cos(x[0] + x[1]) - std::sin(x[1]) * std::sin(x[2]) + std::cos(x[2]);
  };
  std::vector<double> hs, es;
  for (int n : {16, 32, 64}) {
    const Grid g(3, n, 2 * kPi);
    const Operators ops(g, Scheme{SchemeKind::central2});
    hs.push_back(g.spacing());
    es.push_back(max_diff(ops.div(sample(g, v)), sample(g, div_v)));
  }
  CHECK(fitted_order(hs, es) == doctest::Approx(2.0).epsilon(0.05));
  const Grid g(3, 16, 2 * kPi);
  CHECK(max_diff(Operators(g, Scheme{}).div(sample(g, v)), sample(g, div_v)) <= 1e-12);
}

TEST_CASE("linearity and shift equivariance on random fields") {
  for (auto kind : {SchemeKind::spectral, SchemeKind::central2, SchemeKind::central4}) {
    const Grid g(3, 16, 1.5);
    const Operators ops(g, Scheme{kind});
    const auto f = random_field(g, 11);
    const auto h = random_field(g, 12);
    const auto combo = 2.0 * f + (-0.5) * h;
    const auto lhs = ops.laplacian(combo);
    const auto rhs = 2.0 * ops.laplacian(f) + (-0.5) * ops.laplacian(h);
    CHECK(max_diff(lhs, rhs) <= 1e-12 * rhs.max_abs());
    const auto d = ops.derivative(f, 1);
    CHECK(max_diff(ops.derivative(2.0 * f + (-0.5) * h, 1), 2.0 * d + (-0.5) * ops.derivative(h, 1)) <=
          1e-12 * d.max_abs());
    CHECK(max_diff(ops.laplacian(shift(f)), shift(ops.laplacian(f))) <= 1e-12 * rhs.max_abs());
    CHECK(max_diff(ops.derivative(shift(f), 0), shift(ops.derivative(f, 0))) <= 1e-12 * d.max_abs());
  }
}

TEST_CASE("Lame solve") {
  const Grid g(3, 16, 2 * kPi);
  const Operators ops(g, Scheme{});
  const ViscosityParams visc(0.7, 0.4);

  const auto zero = ops.solve_lame_periodic(VectorField(g), visc);
  CHECK(zero.z.max_abs() == 0.0);

  // Longitudinal mode: e parallel to k = (1, 2, 0).
  const std::array<double, 3> kv{1.0, 2.0, 0.0};
  const double k2 = 5.0;
  auto mode = [&](int d) { return Fn([&, d](const auto& x) { return kv[d] * std::cos(x[0] + 2 * x[1]); }); };
  const auto rhs = sample(g, {mode(0), mode(1), mode(2)});
  const auto sol = ops.solve_lame_periodic(rhs, visc);
  CHECK(max_diff(sol.z, (-1.0 / (visc.longitudinal() * k2)) * rhs) <= 1e-12);

  // Transverse mode: e = (0, 0, 1) with k = (1, 2, 0).
  const auto tr = sample(g, {[](const auto&) { return 0.0; }, [](const auto&) { return 0.0; },
                             [](const auto& x) { return std::sin(x[0] + 2 * x[1]); }});
  CHECK(max_diff(ops.solve_lame_periodic(tr, visc).z, (-1.0 / (visc.mu() * k2)) * tr) <= 1e-12);

  // Round trip with a mean to be removed.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::array<Fn, 3> parts;
  for (int d = 0; d < 3; ++d) {
    const double a = dist(rng), b = dist(rng), c = dist(rng), mean = dist(rng);
    parts[d] = [=](const auto& x) {
      return mean + a * std::sin(x[0] - x[2]) + b * std::cos(2 * x[1] + x[0]) + c * std::sin(3 * x[2]);
    };
  }
  const auto f = sample(g, parts);
  const auto s = ops.solve_lame_periodic(f, visc);
  VectorField expected = f;
  for (int d = 0; d < 3; ++d) {
    for (double& v : expected.component(d)) v -= s.subtracted_means[d];
  }
  for (int d = 0; d < 3; ++d) {
    double mean = 0.0;
    for (double v : f.component(d)) mean += v;
    CHECK(s.subtracted_means[d] == doctest::Approx(mean / g.points()).epsilon(1e-12));
  }
  CHECK(max_diff(ops.apply_lame(s.z, visc), expected) <= 1e-10 * f.max_abs());
}
