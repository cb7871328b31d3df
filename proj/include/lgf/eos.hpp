#pragma once

/// @file eos.hpp
/// @brief Mixture pressure law of the liquid-gas model and the associated
/// potential energy density.
///
/// The common pressure of both phases is the positive root of the phase
/// equations of state,
///
///   P(m, n) = C0 * (-b + sqrt(b^2 + c)),
///   b = k0 - m - a0 n,  c = 4 k0 a0 n,
///   C0 = a_l^2 / 2,  k0 = rho_l0 - P_l0 / a_l^2,  a0 = (a_g / a_l)^2,
///
/// where m and n are the liquid and gas masses. All functions here are pure.

namespace lgf {

/// Constants of the pressure law plus the far-field state (m~, n~).
class EosParams {
 public:
  /// Throws ParameterError unless every input is finite, the sonic speeds,
  /// rho_l0, m~ and n~ are positive, P_l0 >= 0 and k0 > 0.
  EosParams(double a_l, double a_g, double rho_l0, double p_l0, double m_tilde, double n_tilde);

  double a_l() const { return a_l_; }
  double a_g() const { return a_g_; }
  double rho_l0() const { return rho_l0_; }
  double p_l0() const { return p_l0_; }
  double m_tilde() const { return m_tilde_; }
  double n_tilde() const { return n_tilde_; }

  double c0() const { return c0_; }
  double k0() const { return k0_; }
  double a0() const { return a0_; }

  /// P(m~, n~).
  double far_field_pressure() const { return p_tilde_; }

 private:
  double a_l_, a_g_, rho_l0_, p_l0_, m_tilde_, n_tilde_;
  double c0_, k0_, a0_, p_tilde_;
};

/// Shear viscosity mu and second viscosity lambda with mu > 0, 2 mu + 3 lambda >= 0.
class ViscosityParams {
 public:
  ViscosityParams(double mu, double lambda);

  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  /// 2 mu + lambda, the longitudinal (bulk) coefficient.
  double longitudinal() const { return 2.0 * mu_ + lambda_; }

 private:
  double mu_, lambda_;
};

/// Exponents that parametrize the a priori estimates. q is validated but
/// not otherwise used; theta sets the reported smallness bound 2 E0^theta.
class AnalysisParams {
 public:
  /// Requires q in (1, 4/3), q^2 < 4 mu / (mu + lambda), lambda < 3 mu and theta in (0, 1).
  AnalysisParams(double q, double theta, const ViscosityParams& visc);

  double q() const { return q_; }
  double theta() const { return theta_; }

 private:
  double q_, theta_;
};

struct PressureGradient {
  double dm;  ///< dP/dm
  double dn;  ///< dP/dn
};

/// b^2 + c below this value is treated as the degenerate set {m = k0, n = 0}.
inline constexpr double kDefaultDegeneracyFloor = 1e-30;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_subdivisions = 10000;
};

/// Requires m, n >= 0 and finite (DomainError otherwise). Always >= 0.
double pressure(double m, double n, const EosParams& p);

/// Requires m, n > 0. Throws DegeneracyError when b^2 + c < floor.
PressureGradient pressure_grad(double m, double n, const EosParams& p,
                               double degeneracy_floor = kDefaultDegeneracyFloor);

/// Second derivative of P in n; strictly negative for m > 0.
double pressure_hess_nn(double m, double n, const EosParams& p,
                        double degeneracy_floor = kDefaultDegeneracyFloor);

/// Potential energy density
///
///   G(m, n/m) = m * int_{m~}^{m} [P(s, (n/m) s) - P(m~, n~)] / s^2 ds
///               + (m/m~) P(m~, n~) - (m/m~) P(m~, (n/m) m~).
///
/// The integral is evaluated by adaptive Gauss-Kronrod quadrature. Returns
/// exactly 0 at (m~, n~) without performing any quadrature. Throws
/// QuadratureError if the subdivision budget runs out.
double potential_energy_g(double m, double n, const EosParams& p,
                          const QuadratureOptions& opts = {});

}  // namespace lgf
