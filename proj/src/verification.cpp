#include "lgf/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <ostream>

#include "lgf/errors.hpp"

namespace lgf {

TrigEval evaluate(const TrigSum& f, const std::array<double, 3>& x, double t, double length) {
  TrigEval e{f.base, 0.0, {0.0, 0.0, 0.0}, {}};
  for (auto& row : e.hess) row = {0.0, 0.0, 0.0};
  const double base = 2.0 * std::numbers::pi / length;
  for (const auto& w : f.waves) {
    const std::array<double, 3> kappa{base * w.mode[0], base * w.mode[1], base * w.mode[2]};
    const double knorm =
        std::sqrt(kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2]);
    const double omega = w.speed * knorm;
    const double theta = kappa[0] * x[0] + kappa[1] * x[1] + kappa[2] * x[2] - omega * t + w.phase;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    e.value += w.amplitude * s;
    e.dt -= w.amplitude * omega * c;
    for (int i = 0; i < 3; ++i) {
      e.grad[i] += w.amplitude * kappa[i] * c;
      for (int j = 0; j < 3; ++j) e.hess[i][j] -= w.amplitude * kappa[i] * kappa[j] * s;
    }
  }
  return e;
}

MmsCase standard_mms_case(int dim, double length, const EosParams& eos, double amplitude) {
  const double guard =
      0.5 * std::min({eos.m_tilde(), eos.n_tilde(), std::abs(eos.m_tilde() - eos.k0())});
  const double a = amplitude * guard;
  MmsCase c;
  c.dim = dim;
  c.length = length;
  c.m.base = eos.m_tilde();
  c.n.base = eos.n_tilde();
  if (dim == 1) {
    c.m.waves = {{{1, 0, 0}, 0.6 * a, 0.5, 0.3}, {{2, 0, 0}, 0.3 * a, -0.7, 1.1}};
    c.n.waves = {{{1, 0, 0}, 0.5 * a, 0.8, 2.0}, {{3, 0, 0}, 0.3 * a, 0.3, 0.5}};
    c.u[0].waves = {{{1, 0, 0}, 0.5 * amplitude, 0.6, 0.0}, {{2, 0, 0}, 0.2 * amplitude, -0.4, 0.7}};
  } else {
    c.m.waves = {{{1, 0, 0}, 0.4 * a, 0.5, 0.3}, {{0, 1, 1}, 0.3 * a, -0.7, 1.1},
                 {{1, 1, 0}, 0.2 * a, 0.2, 0.4}};
    c.n.waves = {{{0, 1, 0}, 0.5 * a, 0.8, 2.0}, {{1, 0, 1}, 0.3 * a, 0.3, 0.5}};
    c.u[0].waves = {{{1, 0, 0}, 0.4 * amplitude, 0.6, 0.0}, {{0, 1, 1}, 0.2 * amplitude, -0.4, 0.7}};
    c.u[1].waves = {{{1, 1, 0}, 0.3 * amplitude, 0.5, 1.3}, {{0, 0, 1}, 0.2 * amplitude, 0.2, 0.2}};
    c.u[2].waves = {{{0, 1, 0}, 0.3 * amplitude, -0.3, 2.1}, {{1, 0, 1}, 0.2 * amplitude, 0.4, 0.9}};
  }
  return c;
}

namespace {

double amplitude_sum(const TrigSum& f) {
  double s = 0.0;
  for (const auto& w : f.waves) s += std::abs(w.amplitude);
  return s;
}

}  // namespace

MmsSolution::MmsSolution(MmsCase c, const Model& model) : case_(std::move(c)), model_(model) {
  if (case_.dim != 1 && case_.dim != 3) throw ParameterError("MMS case dim must be 1 or 3");
  const auto& eos = model_.eos;
  const double guard =
      0.5 * std::min({eos.m_tilde(), eos.n_tilde(), std::abs(eos.m_tilde() - eos.k0())});
  const double am = amplitude_sum(case_.m);
  const double an = amplitude_sum(case_.n);
  if ((am > 0.0 && !(am < guard)) || (an > 0.0 && !(an < guard))) {
    throw ParameterError(
        "MMS amplitudes must stay below 0.5*min(m~, n~, |m~ - k0|) to keep away from "
        "vacuum and the pressure-law degeneracy");
  }
}

FlowState MmsSolution::exact(const Grid& grid, double t) const {
  if (grid.dim() != case_.dim) throw DimensionError("grid dimension differs from the MMS case");
  FlowState s{ScalarField(grid), ScalarField(grid), VectorField(grid), t};
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto x = grid.position(i);
    s.m[i] = evaluate(case_.m, x, t, case_.length).value;
    s.n[i] = evaluate(case_.n, x, t, case_.length).value;
    for (int j = 0; j < grid.dim(); ++j) {
      s.u.component(j)[i] = evaluate(case_.u[j], x, t, case_.length).value;
    }
  }
  return s;
}

MmsSolution::Sources MmsSolution::sources_at(const std::array<double, 3>& x, double t) const {
  const int dim = case_.dim;
  const double L = case_.length;
  const auto m = evaluate(case_.m, x, t, L);
  const auto n = evaluate(case_.n, x, t, L);
  std::array<TrigEval, 3> u{};
  for (int j = 0; j < dim; ++j) u[j] = evaluate(case_.u[j], x, t, L);

  double div_u = 0.0;
  for (int j = 0; j < dim; ++j) div_u += u[j].grad[j];

  Sources s{m.dt + m.value * div_u, n.dt + n.value * div_u, {0.0, 0.0, 0.0}};
  for (int j = 0; j < dim; ++j) {
    s.m += m.grad[j] * u[j].value;
    s.n += n.grad[j] * u[j].value;
  }

  const auto pg = pressure_grad(m.value, n.value, model_.eos);
  const double mu = model_.visc.mu();
  const double mu_lambda = model_.visc.mu() + model_.visc.lambda();
  for (int j = 0; j < dim; ++j) {
    double lap = 0.0;
    double grad_div = 0.0;
    double adv = 0.0;
    for (int i = 0; i < dim; ++i) {
      lap += u[j].hess[i][i];
      grad_div += u[i].hess[i][j];
      adv += u[i].value * u[j].grad[i];
    }
    const double grad_p = pg.dm * m.grad[j] + pg.dn * n.grad[j];
    s.u[j] = u[j].dt + adv - (mu * lap + mu_lambda * grad_div - grad_p) / m.value;
  }
  return s;
}

Forcing MmsSolution::forcing(const Grid& grid) const {
  return [self = *this, grid](double t, RhsOutput& out) {
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const auto s = self.sources_at(grid.position(i), t);
      out.dm_dt[i] += s.m;
      out.dn_dt[i] += s.n;
      for (int j = 0; j < grid.dim(); ++j) out.du_dt.component(j)[i] += s.u[j];
    }
  };
}

bool ConvergenceReport::pass() const {
  for (int f = 0; f < 3; ++f) {
    if (!monotone[f]) return false;
    if (std::abs(order_l2[f] - expected_order) > slack) return false;
  }
  return true;
}

double fit_order(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("order fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(const MmsSolution& mms, std::span<const StudyLevel> levels,
                                    Scheme scheme, Method method, RefinementAxis axis,
                                    double horizon, double expected_order, double slack) {
  if (levels.size() < 3) throw ParameterError("a convergence study needs at least 3 resolutions");
  const auto& c = mms.mms_case();
  ConvergenceReport report;
  report.axis = axis;
  report.scheme = scheme;
  report.method = method;
  report.horizon = horizon;
  report.expected_order = expected_order;
  report.slack = slack;

  IntegratorSettings settings;
  settings.method = method;
  settings.t_end = horizon;

  for (const auto& level : levels) {
    try {
      const Grid grid(c.dim, level.n, c.length);
      const Operators ops(grid, scheme);
      const auto forcing = mms.forcing(grid);
      const int steps = std::max(1, static_cast<int>(std::ceil(horizon / level.dt - 1e-9)));
      const double dt = horizon / steps;
      FlowState s = mms.exact(grid, 0.0);
      for (int k = 0; k < steps; ++k) {
        s = step(s, dt, mms.model(), ops, settings, &forcing);
        if (k == steps - 1) s.t = horizon;
      }
      const auto ref = mms.exact(grid, horizon);

      LevelResult r{level.n, grid.spacing(), dt, {}};
      const auto em = s.m - ref.m;
      const auto en = s.n - ref.n;
      const auto eu = s.u - ref.u;
      r.errors[0] = {l2_norm(em), em.max_abs()};
      r.errors[1] = {l2_norm(en), en.max_abs()};
      r.errors[2] = {l2_norm(eu), eu.max_abs()};
      report.levels.push_back(r);
    } catch (Error& e) {
      e.append_context("convergence level N=" + std::to_string(level.n) +
                       ", dt=" + std::to_string(level.dt));
      throw;
    }
  }

  std::vector<double> x;
  for (const auto& l : report.levels) x.push_back(axis == RefinementAxis::space ? l.h : l.dt);
  for (int f = 0; f < 3; ++f) {
    std::vector<double> l2, linf;
    bool mono = true;
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      l2.push_back(report.levels[i].errors[f].l2);
      linf.push_back(report.levels[i].errors[f].linf);
      if (i > 0 && !(l2[i] < l2[i - 1])) mono = false;
    }
    report.order_l2[f] = fit_order(x, l2);
    report.order_linf[f] = fit_order(x, linf);
    report.monotone[f] = mono;
  }
  return report;
}

void write_report_csv(std::ostream& os, const ConvergenceReport& report) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  const std::string axis = report.axis == RefinementAxis::space ? "space" : "time";
  os << "axis,scheme,method,field,n,h,dt,err_l2,err_linf\n";
  for (const auto& l : report.levels) {
    for (int f = 0; f < 3; ++f) {
      os << axis << ',' << to_string(report.scheme.kind) << ',' << to_string(report.method) << ','
         << kStudyFields[f] << ',' << l.n << ',' << num(l.h) << ',' << num(l.dt) << ','
         << num(l.errors[f].l2) << ',' << num(l.errors[f].linf) << '\n';
    }
  }
  os << "# summary";
  for (int f = 0; f < 3; ++f) os << " order_l2_" << kStudyFields[f] << '=' << num(report.order_l2[f]);
  for (int f = 0; f < 3; ++f) {
    os << " order_linf_" << kStudyFields[f] << '=' << num(report.order_linf[f]);
  }
  os << " expected=" << num(report.expected_order) << " pass=" << (report.pass() ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------

EosFunctions EosFunctions::from(const EosParams& p) {
  return {[p](double m, double n) { return lgf::pressure(m, n, p); },
          [p](double m, double n) { return pressure_grad(m, n, p); },
          [p](double m, double n) { return pressure_hess_nn(m, n, p); }};
}

bool EosSweepReport::pass() const {
  return violations.empty() && std::abs(blowup_slope - kBlowupSlope) <= kBlowupSlopeTolerance;
}

EosSweepReport eos_property_sweep(const EosParams& params, const SweepGrid& grid,
                                  const EosFunctions* functions) {
  const EosFunctions fn = functions != nullptr ? *functions : EosFunctions::from(params);
  EosSweepReport report;
  auto logspace = [&](double lo, double hi, int i) {
    if (grid.count == 1) return lo;
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (grid.count - 1));
  };
  auto flag = [&](const char* check, double m, double n, double value) {
    report.violations.push_back({check, m, n, value});
  };

  for (int i = 0; i < grid.count; ++i) {
    const double m = logspace(grid.m_min, grid.m_max, i);
    for (int j = 0; j < grid.count; ++j) {
      const double n = logspace(grid.n_min, grid.n_max, j);
      ++report.points_checked;
      const double p = fn.pressure(m, n);
      const auto g = fn.grad(m, n);
      const double hnn = fn.hess_nn(m, n);
      if (!(p >= 0.0)) flag("P >= 0", m, n, p);
      if (!(g.dm > 0.0)) flag("P_m > 0", m, n, g.dm);
      if (!(g.dn > 0.0)) flag("P_n > 0", m, n, g.dn);
      if (!(hnn < 0.0)) flag("d2P/dn2 < 0", m, n, hnn);

      const double hm = 1e-6 * std::max(1.0, std::abs(m));
      const double hn = 1e-6 * std::max(1.0, std::abs(n));
      const double fd_m = (fn.pressure(m + hm, n) - fn.pressure(m - hm, n)) / (2.0 * hm);
      const double fd_n = (fn.pressure(m, n + hn) - fn.pressure(m, n - hn)) / (2.0 * hn);
      const double rel_m = std::abs(fd_m - g.dm) / std::abs(g.dm);
      const double rel_n = std::abs(fd_n - g.dn) / std::abs(g.dn);
      report.max_fd_rel_error = std::max({report.max_fd_rel_error, rel_m, rel_n});
      if (!(rel_m <= kFdRelTolerance)) flag("P_m matches finite differences", m, n, rel_m);
      if (!(rel_n <= kFdRelTolerance)) flag("P_n matches finite differences", m, n, rel_n);
    }
  }

  std::vector<double> ns, hs;
  for (int k = 4; k <= 20; ++k) {
    const double n = std::ldexp(1.0, -k);
    ns.push_back(n);
    hs.push_back(std::abs(fn.hess_nn(params.k0(), n)));
  }
  report.blowup_slope = fit_order(ns, hs);
  return report;
}

}  // namespace lgf
