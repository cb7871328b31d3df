#include "lgf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgf/errors.hpp"

namespace lgf {

namespace {

double max_abs(const ScalarField& f) { return f.max_abs(); }

VectorField mass_acceleration(const FlowState& state, const Model& model, const Operators& ops) {
  const auto r = rhs(state, model, ops, 0.0);
  return state.m * material_derivative_u(state, r, ops);
}

}  // namespace

EnergyParts total_energy(const FlowState& state, const EosParams& eos,
                         const QuadratureOptions& quad) {
  const Grid& grid = state.grid();
  ScalarField kinetic(grid);
  ScalarField potential(grid);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    double u2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) u2 += state.u.component(d)[i] * state.u.component(d)[i];
    kinetic[i] = 0.5 * state.m[i] * u2;
    potential[i] = potential_energy_g(state.m[i], state.n[i], eos, quad);
  }
  const double ke = integrate(kinetic);
  const double pe = integrate(potential);
  return {ke + pe, ke, pe};
}

double gradient_energy(const FlowState& state, const Operators& ops) {
  const auto tensor = ops.gradient_tensor(state.u);
  double total = 0.0;
  for (const auto& g : tensor) {
    for (int d = 0; d < g.components(); ++d) {
      const auto c = g.component_field(d);
      total += integrate(c * c);
    }
  }
  return total;
}

double dissipation(const FlowState& state, const ViscosityParams& visc, const Operators& ops) {
  const auto div_u = ops.div(state.u);
  return visc.mu() * gradient_energy(state, ops) +
         (visc.mu() + visc.lambda()) * integrate(div_u * div_u);
}

ScalarField effective_viscous_flux(const FlowState& state, const Model& model,
                                   const Operators& ops) {
  ScalarField f = model.visc.longitudinal() * ops.div(state.u);
  const double p_tilde = model.eos.far_field_pressure();
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] += p_tilde - pressure(state.m[i], state.n[i], model.eos);
  }
  return f;
}

VectorField material_derivative_u(const FlowState& state, const RhsOutput& rhs_out,
                                  const Operators& ops) {
  const int dim = state.grid().dim();
  VectorField out = rhs_out.du_dt;
  const auto tensor = ops.gradient_tensor(state.u);
  for (int j = 0; j < dim; ++j) {
    auto c = out.component(j);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (int k = 0; k < dim; ++k) c[i] += state.u.component(k)[i] * tensor[j].component(k)[i];
    }
  }
  return out;
}

VectorField momentum_forces(const FlowState& state, const Model& model, const Operators& ops) {
  VectorField f = ops.apply_lame(state.u, model.visc);
  f -= ops.grad(pressure_field(state.m, state.n, model.eos));
  return f;
}

double construction_identity_residual(const FlowState& state, const Model& model,
                                      const Operators& ops) {
  const auto grad_p = ops.grad(pressure_field(state.m, state.n, model.eos));
  const auto diff = mass_acceleration(state, model, ops) - momentum_forces(state, model, ops);
  return diff.max_abs() / (1.0 + grad_p.max_abs());
}

double check_elliptic_f(const FlowState& state, const Model& model, const Operators& ops) {
  const auto lap_f = ops.laplacian(effective_viscous_flux(state, model, ops));
  const auto div_mu = ops.div(mass_acceleration(state, model, ops));
  return l2_norm(lap_f - div_mu) / std::max(1.0, l2_norm(div_mu));
}

double check_elliptic_omega(const FlowState& state, const Model& model, const Operators& ops) {
  if (state.grid().dim() != 3) {
    throw DimensionError("the vorticity identity requires a 3D grid");
  }
  const auto omega = ops.antisym_grad(state.u);
  const auto mu_dot = mass_acceleration(state, model, ops);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = j + 1; k < 3; ++k) {
      const auto lhs = model.visc.mu() * ops.laplacian(omega(j, k));
      const auto rhs_side = ops.derivative(mu_dot.component_field(j), k) -
                            ops.derivative(mu_dot.component_field(k), j);
      worst = std::max(worst, l2_norm(lhs - rhs_side) / std::max(1.0, l2_norm(rhs_side)));
    }
  }
  return worst;
}

double check_laplacian_decomposition(const FlowState& state, const Model& model,
                                     const Operators& ops) {
  const int dim = state.grid().dim();
  const double lon = model.visc.longitudinal();
  const double p_tilde = model.eos.far_field_pressure();
  ScalarField potential = effective_viscous_flux(state, model, ops);
  for (std::size_t i = 0; i < potential.size(); ++i) {
    potential[i] = (potential[i] + pressure(state.m[i], state.n[i], model.eos) - p_tilde) / lon;
  }
  const auto grad_potential = ops.grad(potential);
  const auto omega = ops.antisym_grad(state.u);
  const auto lap_u = ops.laplacian(state.u);

  double worst = 0.0;
  double scale = 1.0;
  for (int j = 0; j < dim; ++j) {
    ScalarField residual = lap_u.component_field(j) - grad_potential.component_field(j);
    if (dim == 3) {
      for (int i = 0; i < 3; ++i) residual -= ops.derivative(omega(j, i), i);
    }
    worst = std::max(worst, max_abs(residual));
    scale = std::max(scale, lap_u.component_field(j).max_abs());
  }
  return worst / scale;
}

HoffResult hoff_decomposition(const FlowState& state, const Model& model, const Operators& ops) {
  const auto grad_p = ops.grad(pressure_field(state.m, state.n, model.eos));
  auto v = ops.solve_lame_periodic(grad_p, model.visc);
  auto w = ops.solve_lame_periodic(mass_acceleration(state, model, ops), model.visc);

  const Grid& grid = state.grid();
  double worst = 0.0;
  for (int d = 0; d < grid.dim(); ++d) {
    const auto u = state.u.component(d);
    const double mean = pairwise_sum(u) / static_cast<double>(grid.points());
    const auto vd = v.z.component(d);
    const auto wd = w.z.component(d);
    for (std::size_t i = 0; i < grid.points(); ++i) {
      worst = std::max(worst, std::abs(u[i] - mean - vd[i] - wd[i]));
    }
  }
  const double residual = worst / std::max(1.0, state.u.max_abs());
  return {HoffPair{std::move(v.z), std::move(w.z), v.subtracted_means, w.subtracted_means},
          residual};
}

LambdaResiduals check_lambda_transport(const FlowState& prev, const FlowState& next,
                                       const Model& model, const Operators& ops) {
  const double dt = next.t - prev.t;
  if (!(dt > 0.0)) throw ParameterError("Lambda transport check needs next.t > prev.t");
  const Grid& grid = prev.grid();
  const double lon = model.visc.longitudinal();
  const double p_tilde = model.eos.far_field_pressure();
  const auto flux = effective_viscous_flux(prev, model, ops);

  auto residual_for = [&](const ScalarField& before, const ScalarField& after, double tilde) {
    ScalarField lambda(grid);
    for (std::size_t i = 0; i < grid.points(); ++i) lambda[i] = lon * std::log(before[i] / tilde);
    const auto grad_lambda = ops.grad(lambda);
    ScalarField res(grid);
    for (std::size_t i = 0; i < grid.points(); ++i) {
      double adv = 0.0;
      for (int d = 0; d < grid.dim(); ++d) {
        adv += prev.u.component(d)[i] * grad_lambda.component(d)[i];
      }
      const double dlambda_dt = lon * std::log(after[i] / before[i]) / dt;
      const double p = pressure(prev.m[i], prev.n[i], model.eos);
      res[i] = dlambda_dt + adv + p - p_tilde + flux[i];
    }
    return res.max_abs() / std::max(1.0, flux.max_abs());
  };
  return {residual_for(prev.m, next.m, model.eos.m_tilde()),
          residual_for(prev.n, next.n, model.eos.n_tilde())};
}

double sigma(double t) { return std::min(1.0, t); }

void FunctionalAccumulator::add(const FunctionalSample& s) {
  const double sg = sigma(s.t);
  const double sg3 = sg * sg * sg;
  sup1_ = std::max(sup1_, sg * s.grad_u_sq);
  sup2_ = std::max(sup2_, sg3 * s.udot_sq);
  if (last_) {
    const double dt = s.t - last_->t;
    const double sl = sigma(last_->t);
    const double sl3 = sl * sl * sl;
    int1_ += 0.5 * dt * (sl * last_->udot_sq + sg * s.udot_sq);
    int2_ += 0.5 * dt * (sl3 * last_->grad_udot_sq + sg3 * s.grad_udot_sq);
  }
  last_ = s;
}

Functionals functionals_a1_a2(std::span<const FunctionalSample> samples) {
  if (samples.empty()) throw ParameterError("A1/A2 need at least one record");
  FunctionalAccumulator acc;
  for (const auto& s : samples) acc.add(s);
  return acc.value();
}

SmallnessReport smallness_report(double e0, double a1, double a2, const AnalysisParams& analysis) {
  const double lhs = a1 + a2;
  const double rhs_bound = 2.0 * std::pow(e0, analysis.theta());
  return {e0, lhs, rhs_bound, lhs <= rhs_bound};
}

RatioBounds ratio_bounds(const FlowState& state) {
  RatioBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    const double s = state.n[i] / state.m[i];
    b.min_s = std::min(b.min_s, s);
    b.max_s = std::max(b.max_s, s);
  }
  return b;
}

double boundary_shell_norm(const FlowState& state, const EosParams& eos, double shell_fraction) {
  const Grid& grid = state.grid();
  const int shell = std::max(1, static_cast<int>(shell_fraction * grid.n()));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto idx = grid.unflatten(i);
    bool in_shell = false;
    for (int d = 0; d < grid.dim(); ++d) {
      in_shell = in_shell || idx[d] < shell || idx[d] >= grid.n() - shell;
    }
    if (!in_shell) continue;
    double u2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) u2 += state.u.component(d)[i] * state.u.component(d)[i];
    worst = std::max(worst, std::abs(state.m[i] - eos.m_tilde()) +
                                std::abs(state.n[i] - eos.n_tilde()) + std::sqrt(u2));
  }
  return worst;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "step",  "t",     "dt",    "E",     "KE",     "PE",        "D",           "M",
      "gradL2", "min_m", "max_m", "min_n", "max_n",  "min_s",     "max_s",       "A1",
      "A2",    "res_F", "res_omega", "res_hoff", "res_lambda1", "res_lambda2", "mass_m",
      "mass_n", "smallness_lhs", "smallness_rhs"};
  return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
  return {static_cast<double>(r.step), r.t, r.dt, r.E, r.KE, r.PE, r.D, r.M, r.gradL2,
          r.min_m, r.max_m, r.min_n, r.max_n, r.min_s, r.max_s, r.A1, r.A2, r.res_F,
          r.res_omega, r.res_hoff, r.res_lambda1, r.res_lambda2, r.mass_m, r.mass_n,
          r.smallness_lhs, r.smallness_rhs};
}

DiagnosticsEngine::DiagnosticsEngine(const Model& model, const Operators& ops,
                                     const AnalysisParams& analysis)
    : model_(model), ops_(ops), analysis_(analysis) {}

DiagnosticsRecord DiagnosticsEngine::record(std::size_t step, double dt, const FlowState& state,
                                            const FlowState* prev) {
  const Grid& grid = state.grid();
  DiagnosticsRecord r;
  r.step = step;
  r.t = state.t;
  r.dt = dt;

  const auto energy = total_energy(state, model_.eos);
  r.E = energy.E;
  r.KE = energy.KE;
  r.PE = energy.PE;
  r.M = gradient_energy(state, ops_);
  r.gradL2 = std::sqrt(r.M);
  r.D = dissipation(state, model_.visc, ops_);
  r.min_m = state.m.min();
  r.max_m = state.m.max();
  r.min_n = state.n.min();
  r.max_n = state.n.max();
  const auto s = ratio_bounds(state);
  r.min_s = s.min_s;
  r.max_s = s.max_s;
  r.mass_m = integrate(state.m);
  r.mass_n = integrate(state.n);

  const auto rhs_out = rhs(state, model_, ops_, 0.0);
  const auto udot = material_derivative_u(state, rhs_out, ops_);
  double grad_udot_sq = 0.0;
  for (const auto& g : ops_.gradient_tensor(udot)) grad_udot_sq += l2_norm(g) * l2_norm(g);
  const double udot_norm = l2_norm(udot);
  acc_.add({state.t, r.M, udot_norm * udot_norm, grad_udot_sq});
  const auto f = acc_.value();
  r.A1 = f.a1;
  r.A2 = f.a2;

  r.res_F = check_elliptic_f(state, model_, ops_);
  r.res_omega = grid.dim() == 3 ? check_elliptic_omega(state, model_, ops_) : 0.0;
  r.res_hoff = hoff_decomposition(state, model_, ops_).residual;
  if (prev != nullptr) {
    const auto lam = check_lambda_transport(*prev, state, model_, ops_);
    r.res_lambda1 = lam.lambda1;
    r.res_lambda2 = lam.lambda2;
  }

  if (!e0_) e0_ = r.E;
  const auto small = smallness_report(*e0_, r.A1, r.A2, analysis_);
  r.smallness_lhs = small.lhs;
  r.smallness_rhs = small.rhs;
  return r;
}

}  // namespace lgf
