#pragma once

/// @file diagnostics.hpp
/// @brief Energy functionals, effective viscous flux, and discrete residuals
/// of the identities satisfied by smooth solutions.
///
/// Residuals are normalized by max(1, ||reference side||) so that they stay
/// meaningful near equilibrium, where both sides vanish.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgf/dynamics.hpp"

namespace lgf {

struct EnergyParts {
  double E;   ///< KE + PE
  double KE;  ///< integral of m |u|^2 / 2
  double PE;  ///< integral of G(m, n/m)
};

EnergyParts total_energy(const FlowState& state, const EosParams& eos,
                         const QuadratureOptions& quad = {});

/// integral of |grad u|^2 (sum over all components of the velocity gradient).
double gradient_energy(const FlowState& state, const Operators& ops);

/// integral of mu |grad u|^2 + (mu + lambda) (div u)^2.
double dissipation(const FlowState& state, const ViscosityParams& visc, const Operators& ops);

/// F = (lambda + 2 mu) div u - P(m, n) + P(m~, n~).
ScalarField effective_viscous_flux(const FlowState& state, const Model& model,
                                   const Operators& ops);

/// u_dot = du/dt + (u . grad) u, using du/dt from an rhs evaluation of the same state.
VectorField material_derivative_u(const FlowState& state, const RhsOutput& rhs_out,
                                  const Operators& ops);

/// mu lap u + (mu + lambda) grad div u - grad P, recomputed from the state.
VectorField momentum_forces(const FlowState& state, const Model& model, const Operators& ops);

/// ||m u_dot - momentum_forces||_inf / (1 + ||grad P||_inf).
double construction_identity_residual(const FlowState& state, const Model& model,
                                      const Operators& ops);

/// ||lap F - div(m u_dot)||_2 / max(1, ||div(m u_dot)||_2).
double check_elliptic_f(const FlowState& state, const Model& model, const Operators& ops);

/// max over j < k of the normalized residual of
/// mu lap omega^{j,k} = d_k(m u_dot^j) - d_j(m u_dot^k). DimensionError in 1D.
double check_elliptic_omega(const FlowState& state, const Model& model, const Operators& ops);

/// Normalized inf-norm residual of
/// lap u^j = d_j((F + P - P~) / (lambda + 2 mu)) + d_i omega^{j,i}.
double check_laplacian_decomposition(const FlowState& state, const Model& model,
                                     const Operators& ops);

struct HoffPair {
  VectorField v;  ///< Lame(v) = grad P
  VectorField w;  ///< Lame(w) = m u_dot
  std::array<double, 3> v_subtracted_means{0.0, 0.0, 0.0};
  std::array<double, 3> w_subtracted_means{0.0, 0.0, 0.0};
};

struct HoffResult {
  HoffPair pair;
  /// ||u - mean(u) - v - w||_inf / max(1, ||u||_inf)
  double residual;
};

HoffResult hoff_decomposition(const FlowState& state, const Model& model, const Operators& ops);

struct LambdaResiduals {
  double lambda1;
  double lambda2;
};

/// Residuals of d_t Lambda + u . grad Lambda + P - P~ = -F for
/// Lambda_1 = (2 mu + lambda) ln(m / m~) and Lambda_2 = (2 mu + lambda) ln(n / n~).
/// The time derivative is the forward difference between the two states;
/// every other term is evaluated at `prev`.
LambdaResiduals check_lambda_transport(const FlowState& prev, const FlowState& next,
                                       const Model& model, const Operators& ops);

/// sigma(t) = min(1, t).
double sigma(double t);

/// Per-record inputs of the A1 / A2 functionals.
struct FunctionalSample {
  double t;
  double grad_u_sq;     ///< integral |grad u|^2
  double udot_sq;       ///< integral |u_dot|^2
  double grad_udot_sq;  ///< integral |grad u_dot|^2
};

struct Functionals {
  double a1;
  double a2;
};

/// A1(T) = sup sigma int|grad u|^2 + int_0^T sigma int|u_dot|^2,
/// A2(T) = sup sigma^3 int|u_dot|^2 + int_0^T sigma^3 int|grad u_dot|^2,
/// with sups over the samples and time integrals by the trapezoid rule over
/// consecutive samples. Throws ParameterError on an empty stream.
Functionals functionals_a1_a2(std::span<const FunctionalSample> samples);

/// Streaming form of functionals_a1_a2.
class FunctionalAccumulator {
 public:
  void add(const FunctionalSample& s);
  Functionals value() const { return {sup1_ + int1_, sup2_ + int2_}; }
  bool empty() const { return !last_.has_value(); }

 private:
  std::optional<FunctionalSample> last_;
  double sup1_ = 0.0, int1_ = 0.0, sup2_ = 0.0, int2_ = 0.0;
};

struct SmallnessReport {
  double e0;
  double lhs;  ///< A1 + A2
  double rhs;  ///< 2 E0^theta
  bool satisfied;
};

SmallnessReport smallness_report(double e0, double a1, double a2, const AnalysisParams& analysis);

struct RatioBounds {
  double min_s;
  double max_s;
};

/// Pointwise extrema of s = n / m.
RatioBounds ratio_bounds(const FlowState& state);

/// Max of |m - m~| + |n - n~| + |u| over the outer shell of the box (the
/// points within shell_fraction * L of a face). Flags perturbations that
/// reached the periodic boundary.
double boundary_shell_norm(const FlowState& state, const EosParams& eos,
                           double shell_fraction = 0.1);

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double E = 0.0;
  double KE = 0.0;
  double PE = 0.0;
  double D = 0.0;
  double M = 0.0;
  double gradL2 = 0.0;
  double min_m = 0.0, max_m = 0.0;
  double min_n = 0.0, max_n = 0.0;
  double min_s = 0.0, max_s = 0.0;
  double A1 = 0.0, A2 = 0.0;
  double res_F = 0.0;
  double res_omega = 0.0;  ///< 0 in 1D, where the vorticity matrix is empty
  double res_hoff = 0.0;
  double res_lambda1 = 0.0, res_lambda2 = 0.0;
  double mass_m = 0.0, mass_n = 0.0;
  double smallness_lhs = 0.0;
  double smallness_rhs = 0.0;
};

/// CSV column names, in output order.
const std::vector<std::string>& record_columns();

/// Column values in the order of record_columns().
std::vector<double> record_values(const DiagnosticsRecord& r);

/// Produces the record stream of one run. Holds the running A1/A2 state and
/// E0 (the energy of the first record it sees).
class DiagnosticsEngine {
 public:
  DiagnosticsEngine(const Model& model, const Operators& ops, const AnalysisParams& analysis);

  /// prev is the accepted state one solver step before `state` (if any);
  /// it feeds the Lambda transport residuals.
  DiagnosticsRecord record(std::size_t step, double dt, const FlowState& state,
                           const FlowState* prev);

 private:
  const Model& model_;
  const Operators& ops_;
  AnalysisParams analysis_;
  FunctionalAccumulator acc_;
  std::optional<double> e0_;
};

}  // namespace lgf
