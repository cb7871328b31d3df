#include "lgf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lgf/errors.hpp"

namespace lgf {

namespace {

void check_finite(const RhsOutput& r, double t) {
  auto bad = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return !std::isfinite(x); });
  };
  if (bad(r.dm_dt.values()) || bad(r.dn_dt.values()) || bad(r.du_dt.data())) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite value in right-hand side at t=" << t;
    throw NonFinite(os.str());
  }
}

void check_finite(const FlowState& s) {
  auto bad = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return !std::isfinite(x); });
  };
  if (bad(s.m.values()) || bad(s.n.values()) || bad(s.u.data())) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite value in state at t=" << s.t;
    throw NonFinite(os.str());
  }
}

// s + a * k
FlowState advance(const FlowState& s, double a, const RhsOutput& k) {
  FlowState out = s;
  for (std::size_t i = 0; i < out.m.size(); ++i) {
    out.m[i] += a * k.dm_dt[i];
    out.n[i] += a * k.dn_dt[i];
  }
  auto u = out.u.data();
  const auto du = k.du_dt.data();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * du[i];
  out.t = s.t + a;
  return out;
}

// a * x + b * y (fields only)
FlowState combine(double a, const FlowState& x, double b, const FlowState& y) {
  FlowState out = x;
  for (std::size_t i = 0; i < out.m.size(); ++i) {
    out.m[i] = a * x.m[i] + b * y.m[i];
    out.n[i] = a * x.n[i] + b * y.n[i];
  }
  auto u = out.u.data();
  const auto ux = x.u.data();
  const auto uy = y.u.data();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = a * ux[i] + b * uy[i];
  return out;
}

}  // namespace

std::string to_string(Method m) { return m == Method::rk4 ? "rk4" : "ssprk3"; }

Method method_from_string(const std::string& s) {
  if (s == "rk4") return Method::rk4;
  if (s == "ssprk3") return Method::ssprk3;
  throw ParameterError("unknown integrator method '" + s + "' (expected rk4 or ssprk3)");
}

void IntegratorSettings::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ParameterError("integrator.cfl in (0, 1] violated");
  if (!(dt_max > 0.0)) throw ParameterError("integrator.dt_max > 0 violated");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("integrator.t_end >= 0 violated");
  if (!(positivity_floor > 0.0)) throw ParameterError("integrator.positivity_floor > 0 violated");
}

void check_positivity(const FlowState& s, double floor) {
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    if (!(s.m[i] > floor)) throw PositivityLoss("m", i, s.m[i], s.t);
  }
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    if (!(s.n[i] > floor)) throw PositivityLoss("n", i, s.n[i], s.t);
  }
}

ScalarField pressure_field(const ScalarField& m, const ScalarField& n, const EosParams& eos) {
  ScalarField p(m.grid());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = pressure(m[i], n[i], eos);
  return p;
}

RhsOutput rhs(const FlowState& state, const Model& model, const Operators& ops,
              double positivity_floor, const Forcing* forcing) {
  check_positivity(state, positivity_floor);
  const Grid& grid = state.grid();
  const int dim = grid.dim();
  const double mu = model.visc.mu();
  const double mu_lambda = model.visc.mu() + model.visc.lambda();

  RhsOutput out{-1.0 * ops.div(state.m * state.u), -1.0 * ops.div(state.n * state.u),
                VectorField(grid)};

  const auto grad_p = ops.grad(pressure_field(state.m, state.n, model.eos));
  const auto tensor = ops.gradient_tensor(state.u);
  ScalarField div_u(grid);
  for (int j = 0; j < dim; ++j) {
    const auto d = tensor[j].component(j);
    for (std::size_t i = 0; i < grid.points(); ++i) div_u[i] += d[i];
  }
  const auto grad_div = ops.grad(div_u);
  const auto lap_u = ops.laplacian(state.u);

  for (int j = 0; j < dim; ++j) {
    auto du = out.du_dt.component(j);
    const auto lap = lap_u.component(j);
    const auto gd = grad_div.component(j);
    const auto gp = grad_p.component(j);
    for (std::size_t i = 0; i < grid.points(); ++i) {
      double adv = 0.0;
      for (int k = 0; k < dim; ++k) adv += state.u.component(k)[i] * tensor[j].component(k)[i];
      du[i] = (mu * lap[i] + mu_lambda * gd[i] - gp[i]) / state.m[i] - adv;
    }
  }
  if (forcing != nullptr && *forcing) (*forcing)(state.t, out);
  check_finite(out, state.t);
  return out;
}

CflBounds cfl_bounds(const FlowState& state, const Model& model) {
  const Grid& grid = state.grid();
  const double h = grid.spacing();
  double c2_max = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto g = pressure_grad(state.m[i], state.n[i], model.eos);
    c2_max = std::max(c2_max, g.dm + (state.n[i] / state.m[i]) * g.dn);
  }
  const double c_max = std::sqrt(c2_max);
  const double u_max = state.u.max_norm();
  const double advective = h / (u_max + c_max);
  const double viscous =
      h * h / (2.0 * grid.dim() * model.visc.longitudinal() / state.m.min());
  return {advective, viscous, c_max};
}

double cfl_dt(const FlowState& state, const Model& model, const IntegratorSettings& settings) {
  const auto b = cfl_bounds(state, model);
  const double dt = settings.cfl * std::min(b.advective, b.viscous);
  if (!std::isfinite(dt) || !(dt > 0.0)) return settings.dt_max;
  return std::min(dt, settings.dt_max);
}

FlowState step(const FlowState& state, double dt, const Model& model, const Operators& ops,
               const IntegratorSettings& settings, const Forcing* forcing) {
  if (!(dt > 0.0)) throw ParameterError("step requires dt > 0");
  const double floor = settings.positivity_floor;
  auto L = [&](const FlowState& s) { return rhs(s, model, ops, floor, forcing); };

  FlowState next = state;
  if (settings.method == Method::rk4) {
    const auto k1 = L(state);
    const auto k2 = L(advance(state, 0.5 * dt, k1));
    const auto k3 = L(advance(state, 0.5 * dt, k2));
    const auto k4 = L(advance(state, dt, k3));
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < next.m.size(); ++i) {
      next.m[i] += w * (k1.dm_dt[i] + 2.0 * k2.dm_dt[i] + 2.0 * k3.dm_dt[i] + k4.dm_dt[i]);
      next.n[i] += w * (k1.dn_dt[i] + 2.0 * k2.dn_dt[i] + 2.0 * k3.dn_dt[i] + k4.dn_dt[i]);
    }
    auto u = next.u.data();
    const auto a = k1.du_dt.data(), b = k2.du_dt.data(), c = k3.du_dt.data(),
               d = k4.du_dt.data();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  } else {
    // Shu-Osher form of SSP-RK3.
    FlowState s1 = advance(state, dt, L(state));
    FlowState s2 = combine(0.75, state, 0.25, advance(s1, dt, L(s1)));
    s2.t = state.t + 0.5 * dt;
    FlowState s3 = advance(s2, dt, L(s2));
    next = combine(1.0 / 3.0, state, 2.0 / 3.0, s3);
  }
  next.t = state.t + dt;
  check_finite(next);
  check_positivity(next, floor);
  return next;
}

// ---------------------------------------------------------------------------

const std::vector<IcRecipe>& ic_recipes() {
  static const std::vector<IcRecipe> recipes = {
      {"equilibrium", {}},
      {"gaussian_bump",
       {{"m_amp", 0.0},
        {"m_width", 1.0},
        {"m_center", 0.0, IcDefault::box_center},
        {"n_amp", 0.0},
        {"n_width", 1.0},
        {"n_center", 0.0, IcDefault::box_center},
        {"u_amp", 0.0},
        {"u_width", 1.0},
        {"u_center", 0.0, IcDefault::box_center}}},
      {"fourier_mode", {{"mode", 1.0}, {"m_amp", 0.0}, {"n_amp", 0.0}, {"u_amp", 0.0}}},
      {"constant_ratio_bump",
       {{"amp", 0.0},
        {"width", 1.0},
        {"center", 0.0, IcDefault::box_center},
        {"ratio", 0.0, IcDefault::far_field_ratio},
        {"u_amp", 0.0},
        {"u_width", 1.0},
        {"u_center", 0.0, IcDefault::box_center}}},
      {"random_modes", {{"modes", 4.0}, {"m_amp", 0.0}, {"n_amp", 0.0}, {"u_amp", 0.0}}},
  };
  return recipes;
}

namespace {

const IcRecipe& find_recipe(const std::string& name) {
  for (const auto& r : ic_recipes()) {
    if (r.name == name) return r;
  }
  throw ParameterError("unknown initial-condition recipe '" + name + "'");
}

std::map<std::string, double> resolve_params(const IcRecipe& recipe, const IcConfig& ic,
                                             const Grid& grid, const EosParams& eos) {
  std::map<std::string, double> out;
  for (const auto& spec : recipe.params) {
    switch (spec.rule) {
      case IcDefault::fixed: out[spec.name] = spec.default_value; break;
      case IcDefault::box_center: out[spec.name] = 0.5 * grid.length(); break;
      case IcDefault::far_field_ratio: out[spec.name] = eos.n_tilde() / eos.m_tilde(); break;
    }
  }
  for (const auto& [key, value] : ic.params) {
    if (!out.contains(key)) {
      throw ParameterError("unknown parameter 'ic." + key + "' for recipe '" + recipe.name + "'");
    }
    out[key] = value;
  }
  return out;
}

double gaussian(const std::array<double, 3>& x, int dim, double center, double width) {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += (x[d] - center) * (x[d] - center);
  return std::exp(-r2 / (width * width));
}

// Portable uniform [0, 1) from the raw 64-bit engine output.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

FlowState make_initial_state(const Grid& grid, const EosParams& eos, const IcConfig& ic,
                             std::uint64_t seed) {
  const IcRecipe& recipe = find_recipe(ic.recipe);
  const auto p = resolve_params(recipe, ic, grid, eos);
  const int dim = grid.dim();
  FlowState s{ScalarField(grid, eos.m_tilde()), ScalarField(grid, eos.n_tilde()), VectorField(grid),
              0.0};
  auto u0 = s.u.component(0);

  if (recipe.name == "gaussian_bump") {
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const auto x = grid.position(i);
      s.m[i] += p.at("m_amp") * gaussian(x, dim, p.at("m_center"), p.at("m_width"));
      s.n[i] += p.at("n_amp") * gaussian(x, dim, p.at("n_center"), p.at("n_width"));
      u0[i] = p.at("u_amp") * gaussian(x, dim, p.at("u_center"), p.at("u_width"));
    }
  } else if (recipe.name == "fourier_mode") {
    const double k = 2.0 * std::numbers::pi * p.at("mode") / grid.length();
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const double x = grid.position(i)[0];
      s.m[i] += p.at("m_amp") * std::cos(k * x);
      s.n[i] += p.at("n_amp") * std::cos(k * x);
      u0[i] = p.at("u_amp") * std::sin(k * x);
    }
  } else if (recipe.name == "constant_ratio_bump") {
    const double ratio = p.at("ratio");
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const auto x = grid.position(i);
      s.m[i] += p.at("amp") * gaussian(x, dim, p.at("center"), p.at("width"));
      s.n[i] = ratio * s.m[i];
      u0[i] = p.at("u_amp") * gaussian(x, dim, p.at("u_center"), p.at("u_width"));
    }
  } else if (recipe.name == "random_modes") {
    std::mt19937_64 rng(seed);
    const int modes = static_cast<int>(p.at("modes"));
    const double base = 2.0 * std::numbers::pi / grid.length();
    for (int j = 1; j <= modes; ++j) {
      std::array<double, 3> kvec{base * j, 0.0, 0.0};
      if (dim == 3) {
        kvec[1] = base * std::floor(3.0 * uniform(rng));
        kvec[2] = base * std::floor(3.0 * uniform(rng));
      }
      const double am = (2.0 * uniform(rng) - 1.0) / modes;
      const double an = (2.0 * uniform(rng) - 1.0) / modes;
      const double au = (2.0 * uniform(rng) - 1.0) / modes;
      const double phase = 2.0 * std::numbers::pi * uniform(rng);
      for (std::size_t i = 0; i < grid.points(); ++i) {
        const auto x = grid.position(i);
        const double arg = kvec[0] * x[0] + kvec[1] * x[1] + kvec[2] * x[2] + phase;
        s.m[i] += p.at("m_amp") * am * std::cos(arg);
        s.n[i] += p.at("n_amp") * an * std::cos(arg);
        u0[i] += p.at("u_amp") * au * std::sin(arg);
      }
    }
  }
  return s;
}

}  // namespace lgf
