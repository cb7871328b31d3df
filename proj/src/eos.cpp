#include "lgf/eos.hpp"

#include <cmath>
#include <sstream>

#include "lgf/errors.hpp"
#include "lgf/quadrature.hpp"

namespace lgf {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

bool finite(double x) { return std::isfinite(x); }

struct Coefficients {
  double b;
  double c;
};

Coefficients coefficients(double m, double n, const EosParams& p) {
  return {p.k0() - m - p.a0() * n, 4.0 * p.k0() * p.a0() * n};
}

// -b + sqrt(b^2 + c) without cancellation when b > 0.
double root_term(double b, double c) {
  const double r = std::sqrt(b * b + c);
  return b > 0.0 ? c / (b + r) : r - b;
}

double checked_discriminant(double m, double n, const EosParams& p, double floor) {
  if (!finite(m) || !finite(n)) throw DomainError("non-finite (m, n) passed to the pressure law");
  if (!(m > 0.0) || !(n > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "pressure derivatives require m > 0 and n > 0, got (m=" << m << ", n=" << n << ")";
    throw DomainError(os.str());
  }
  const auto [b, c] = coefficients(m, n, p);
  const double disc = b * b + c;
  if (disc < floor) throw DegeneracyError(m, n, disc);
  return disc;
}

}  // namespace

EosParams::EosParams(double a_l, double a_g, double rho_l0, double p_l0, double m_tilde,
                     double n_tilde)
    : a_l_(a_l), a_g_(a_g), rho_l0_(rho_l0), p_l0_(p_l0), m_tilde_(m_tilde), n_tilde_(n_tilde) {
  require(finite(a_l) && finite(a_g) && finite(rho_l0) && finite(p_l0) && finite(m_tilde) &&
              finite(n_tilde),
          "eos parameters must be finite");
  require(a_l > 0.0, "eos.a_l > 0 violated");
  require(a_g > 0.0, "eos.a_g > 0 violated");
  require(rho_l0 > 0.0, "eos.rho_l0 > 0 violated");
  require(p_l0 >= 0.0, "eos.P_l0 >= 0 violated");
  require(m_tilde > 0.0, "eos.m_tilde > 0 violated");
  require(n_tilde > 0.0, "eos.n_tilde > 0 violated");
  c0_ = 0.5 * a_l * a_l;
  k0_ = rho_l0 - p_l0 / (a_l * a_l);
  a0_ = (a_g / a_l) * (a_g / a_l);
  require(k0_ > 0.0, "k0 = rho_l0 - P_l0/a_l^2 > 0 violated");
  p_tilde_ = pressure(m_tilde, n_tilde, *this);
}

ViscosityParams::ViscosityParams(double mu, double lambda) : mu_(mu), lambda_(lambda) {
  require(finite(mu) && finite(lambda), "viscosities must be finite");
  require(mu > 0.0, "mu > 0 violated");
  require(2.0 * mu + 3.0 * lambda >= 0.0, "2*mu + 3*lambda >= 0 violated (needed for mu+lambda > 0)");
}

AnalysisParams::AnalysisParams(double q, double theta, const ViscosityParams& visc)
    : q_(q), theta_(theta) {
  require(finite(q) && finite(theta), "analysis parameters must be finite");
  require(q > 1.0 && q < 4.0 / 3.0, "q in (1, 4/3) violated");
  require(q * q < 4.0 * visc.mu() / (visc.mu() + visc.lambda()),
          "q^2 < 4*mu/(mu+lambda) violated");
  require(visc.lambda() < 3.0 * visc.mu(), "lambda < 3*mu violated");
  require(theta > 0.0 && theta < 1.0, "theta in (0, 1) violated");
}

double pressure(double m, double n, const EosParams& p) {
  if (!finite(m) || !finite(n)) throw DomainError("non-finite (m, n) passed to the pressure law");
  if (m < 0.0 || n < 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "pressure requires m >= 0 and n >= 0, got (m=" << m << ", n=" << n << ")";
    throw DomainError(os.str());
  }
  const auto [b, c] = coefficients(m, n, p);
  return p.c0() * root_term(b, c);
}

PressureGradient pressure_grad(double m, double n, const EosParams& p, double degeneracy_floor) {
  const double disc = checked_discriminant(m, n, p, degeneracy_floor);
  const auto [b, c] = coefficients(m, n, p);
  const double r = std::sqrt(disc);
  // 1 - b/r == c / (r (r + b)) for b > 0.
  const double one_minus = b > 0.0 ? c / (r * (r + b)) : 1.0 - b / r;
  return {p.c0() * one_minus, p.c0() * p.a0() * (1.0 + (m + p.a0() * n + p.k0()) / r)};
}

double pressure_hess_nn(double m, double n, const EosParams& p, double degeneracy_floor) {
  const double disc = checked_discriminant(m, n, p, degeneracy_floor);
  return -4.0 * p.c0() * p.a0() * p.a0() * p.k0() * m / (disc * std::sqrt(disc));
}

double potential_energy_g(double m, double n, const EosParams& p, const QuadratureOptions& opts) {
  if (!finite(m) || !finite(n)) throw DomainError("non-finite (m, n) passed to G");
  if (!(m > 0.0) || n < 0.0) throw DomainError("G requires m > 0 and n >= 0");
  const double mt = p.m_tilde();
  const double p_tilde = p.far_field_pressure();
  if (m == mt && n == p.n_tilde()) return 0.0;

  const double ratio = n / m;
  double integral = 0.0;
  if (m != mt) {
    auto integrand = [&](double s) { return (pressure(s, ratio * s, p) - p_tilde) / (s * s); };
    integral = integrate_adaptive(integrand, mt, m, opts.abs_tol, opts.max_subdivisions).value;
  }
  // (n/m) m~ evaluated as n (m~/m) so that m == m~ reproduces n bitwise.
  const double n_at_tilde = n * (mt / m);
  return m * integral + (m / mt) * (p_tilde - pressure(mt, n_at_tilde, p));
}

}  // namespace lgf
