#pragma once

/// @file verification.hpp
/// @brief Manufactured solutions, convergence studies and the EOS property sweep.

#include <array>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lgf/dynamics.hpp"

namespace lgf {

/// a * sin(kappa . x - omega t + phase), kappa = (2 pi / L) * mode,
/// omega = speed * |kappa|.
struct TrigWave {
  std::array<int, 3> mode{0, 0, 0};
  double amplitude = 0.0;
  double speed = 0.0;
  double phase = 0.0;
};

struct TrigSum {
  double base = 0.0;
  std::vector<TrigWave> waves;
};

struct TrigEval {
  double value;
  double dt;
  std::array<double, 3> grad;
  std::array<std::array<double, 3>, 3> hess;
};

TrigEval evaluate(const TrigSum& f, const std::array<double, 3>& x, double t, double length);

struct MmsCase {
  int dim = 1;
  double length = 2.0 * std::numbers::pi;
  TrigSum m;
  TrigSum n;
  std::array<TrigSum, 3> u;
};

/// A smooth travelling-wave case around (m~, n~, 0) with the given amplitude
/// scale. Exercises every term of the system, including the coupling
/// between components in 3D.
MmsCase standard_mms_case(int dim, double length, const EosParams& eos, double amplitude);

/// Analytic fields plus the source terms that make them an exact solution
/// of the forced system
///
///   m_t + div(m u) = S_m,  n_t + div(n u) = S_n,
///   u_t + (u . grad) u - [mu lap u + (mu + lambda) grad div u - grad P] / m = S_u.
class MmsSolution {
 public:
  /// Throws ParameterError unless the summed m and n amplitudes each stay
  /// below 0.5 * min(m~, n~, |m~ - k0|).
  MmsSolution(MmsCase c, const Model& model);

  const MmsCase& mms_case() const { return case_; }
  const Model& model() const { return model_; }

  FlowState exact(const Grid& grid, double t) const;

  struct Sources {
    double m;
    double n;
    std::array<double, 3> u;
  };
  Sources sources_at(const std::array<double, 3>& x, double t) const;

  /// Forcing that adds the sources on the given grid.
  Forcing forcing(const Grid& grid) const;

 private:
  MmsCase case_;
  Model model_;
};

inline MmsSolution mms_sources(const MmsCase& c, const Model& model) { return {c, model}; }

enum class RefinementAxis { space, time };

struct StudyLevel {
  int n;
  double dt;
};

struct FieldErrors {
  double l2;
  double linf;
};

struct LevelResult {
  int n;
  double h;
  double dt;  ///< the step actually used (horizon / step count)
  std::array<FieldErrors, 3> errors;  ///< m, n, u
};

inline constexpr std::array<const char*, 3> kStudyFields = {"m", "n", "u"};

struct ConvergenceReport {
  RefinementAxis axis = RefinementAxis::space;
  Scheme scheme;
  Method method = Method::rk4;
  double horizon = 0.1;
  std::vector<LevelResult> levels;
  std::array<double, 3> order_l2{};
  std::array<double, 3> order_linf{};
  std::array<bool, 3> monotone{};
  double expected_order = 0.0;
  double slack = 0.0;

  /// Monotone error decrease in every field and |L2 order - expected| <= slack.
  bool pass() const;
};

/// Least-squares slope of log(y) against log(x).
double fit_order(std::span<const double> x, std::span<const double> y);

/// Runs the forced system from the exact t = 0 state to `horizon` at each
/// level with a fixed step (rounded so the horizon is hit exactly) and fits
/// the order against h (space) or dt (time). Needs >= 3 levels.
ConvergenceReport convergence_study(const MmsSolution& mms, std::span<const StudyLevel> levels,
                                    Scheme scheme, Method method, RefinementAxis axis,
                                    double horizon, double expected_order, double slack);

/// CSV with one row per level per field followed by a "# summary" line
/// carrying the fitted orders.
void write_report_csv(std::ostream& os, const ConvergenceReport& report);

// ---------------------------------------------------------------------------

/// The pressure-law functions under test; defaults to the real EOS.
struct EosFunctions {
  std::function<double(double, double)> pressure;
  std::function<PressureGradient(double, double)> grad;
  std::function<double(double, double)> hess_nn;

  static EosFunctions from(const EosParams& p);
};

/// Log-spaced sample grid over [m_min, m_max] x [n_min, n_max].
struct SweepGrid {
  double m_min = 1e-2, m_max = 1e2;
  double n_min = 1e-2, n_max = 1e2;
  int count = 64;
};

struct SweepViolation {
  std::string check;
  double m;
  double n;
  double value;
};

struct EosSweepReport {
  std::size_t points_checked = 0;
  std::vector<SweepViolation> violations;
  double max_fd_rel_error = 0.0;
  double blowup_slope = 0.0;  ///< slope of log|d2P/dn2| vs log n along m = k0
  bool pass() const;
};

inline constexpr double kFdRelTolerance = 1e-6;
inline constexpr double kBlowupSlope = -1.5;
inline constexpr double kBlowupSlopeTolerance = 0.1;

/// Checks P >= 0, P_m > 0, P_n > 0, d2P/dn2 < 0 and finite-difference
/// agreement of both first derivatives at every sample, and fits the blow-up
/// slope of d2P/dn2 along m = k0 with n = 2^-k, k = 4..20.
EosSweepReport eos_property_sweep(const EosParams& params, const SweepGrid& grid = {},
                                  const EosFunctions* functions = nullptr);

}  // namespace lgf
