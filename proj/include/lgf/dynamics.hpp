#pragma once

/// @file dynamics.hpp
/// @brief Semi-discrete right-hand side of the liquid-gas system and its
/// explicit time integration.
///
///   m_t = -div(m u)
///   n_t = -div(n u)
///   u_t = [mu lap u + (mu + lambda) grad div u - grad P(m, n)] / m - (u . grad) u
///
/// The mass equations are discretized in divergence form; the momentum
/// equation is advanced in velocity form, which is equivalent for m > 0.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lgf/eos.hpp"
#include "lgf/field.hpp"
#include "lgf/ops.hpp"

namespace lgf {

struct Model {
  EosParams eos;
  ViscosityParams visc;
};

struct RhsOutput {
  ScalarField dm_dt;
  ScalarField dn_dt;
  VectorField du_dt;
};

/// Adds a source term (evaluated at time t) into an rhs evaluation.
using Forcing = std::function<void(double t, RhsOutput& out)>;

enum class Method { rk4, ssprk3 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegratorSettings {
  Method method = Method::rk4;
  double cfl = 0.4;
  double dt_max = 1.0;
  double t_end = 0.0;
  double positivity_floor = 1e-8;

  /// 0 < cfl <= 1, dt_max > 0, t_end >= 0, positivity_floor > 0.
  void validate() const;
};

/// Throws PositivityLoss naming the first offending point when min m or
/// min n is not above floor.
void check_positivity(const FlowState& s, double floor);

/// P(m, n) at every grid point.
ScalarField pressure_field(const ScalarField& m, const ScalarField& n, const EosParams& eos);

RhsOutput rhs(const FlowState& state, const Model& model, const Operators& ops,
              double positivity_floor = 1e-8, const Forcing* forcing = nullptr);

struct CflBounds {
  double advective;  ///< h / (max|u| + c_max)
  double viscous;    ///< h^2 min m / (2 dim (2 mu + lambda))
  double c_max;      ///< max sqrt(P_m + (n/m) P_n)
};

CflBounds cfl_bounds(const FlowState& state, const Model& model);

/// cfl * min(advective, viscous), capped by dt_max.
double cfl_dt(const FlowState& state, const Model& model, const IntegratorSettings& settings);

/// One explicit step; positivity and finiteness of the result are checked.
FlowState step(const FlowState& state, double dt, const Model& model, const Operators& ops,
               const IntegratorSettings& settings, const Forcing* forcing = nullptr);

// ---------------------------------------------------------------------------
// Initial conditions

struct IcConfig {
  std::string recipe = "equilibrium";
  std::map<std::string, double> params;
};

enum class IcDefault { fixed, box_center, far_field_ratio };

struct IcParamSpec {
  std::string name;
  double default_value;
  IcDefault rule = IcDefault::fixed;
};

struct IcRecipe {
  std::string name;
  std::vector<IcParamSpec> params;
};

/// The built-in recipes:
///  - equilibrium: (m~, n~, 0).
///  - gaussian_bump: m~ + m_amp g_m, n~ + n_amp g_n, u^0 = u_amp g_u, with
///    g = exp(-|x - c|^2 / w^2) per field (c on the diagonal of the box).
///  - fourier_mode: cosine perturbations of m and n, sine perturbation of u^0
///    with integer mode number along axis 0.
///  - constant_ratio_bump: m = m~ + amp g, n = ratio * m (ratio defaults to
///    n~/m~), u^0 = u_amp g_u.
///  - random_modes: a few low Fourier modes with amplitudes drawn from the
///    config seed.
const std::vector<IcRecipe>& ic_recipes();

/// Throws ParameterError for unknown recipes or parameter names.
FlowState make_initial_state(const Grid& grid, const EosParams& eos, const IcConfig& ic,
                             std::uint64_t seed);

}  // namespace lgf
