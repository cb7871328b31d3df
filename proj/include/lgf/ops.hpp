#pragma once

/// @file ops.hpp
/// @brief Periodic discrete differential operators.
///
/// Spectral operators are Fourier multipliers: the first derivative along
/// axis d multiplies by i k_d, the second by -k_d^2, with the Nyquist
/// wavenumber of that axis mapped to zero. With dealiasing on, every
/// derivative is additionally masked by the 2/3 rule (modes with
/// 3 |k_index| >= N on any axis are removed). Because the masks are 0/1 and
/// shared by every operator, compositions such as div(grad f) reproduce
/// laplacian(f) to rounding.

#include <array>
#include <memory>
#include <string>

#include "lgf/eos.hpp"
#include "lgf/field.hpp"

namespace lgf {

enum class SchemeKind { spectral, central2, central4 };

struct Scheme {
  SchemeKind kind = SchemeKind::spectral;
  bool dealias = true;  ///< spectral only
};

std::string to_string(SchemeKind k);
/// Throws ParameterError for unknown names.
SchemeKind scheme_kind_from_string(const std::string& s);

/// Antisymmetric matrix field omega^{j,k}; lower entries are exact
/// negations of the upper ones and the diagonal is zero.
class AntisymmetricField {
 public:
  explicit AntisymmetricField(const Grid& grid);
  int dim() const { return dim_; }
  const ScalarField& operator()(int j, int k) const { return entries_[j * 3 + k]; }
  /// Stores f at (j, k) and -f at (k, j); j != k.
  void set(int j, int k, const ScalarField& f);

 private:
  int dim_;
  std::vector<ScalarField> entries_;
};

struct LameSolution {
  VectorField z;
  /// Per-component mean removed from the right-hand side before inversion.
  std::array<double, 3> subtracted_means{0.0, 0.0, 0.0};
};

class SpectralTransform;

class Operators {
 public:
  /// central4 requires N >= 16 (ParameterError).
  Operators(const Grid& grid, Scheme scheme);
  ~Operators();
  Operators(Operators&&) noexcept;
  Operators& operator=(Operators&&) noexcept;

  const Grid& grid() const { return grid_; }
  Scheme scheme() const { return scheme_; }

  ScalarField derivative(const ScalarField& f, int axis) const;
  VectorField grad(const ScalarField& f) const;
  ScalarField div(const VectorField& v) const;
  ScalarField laplacian(const ScalarField& f) const;
  VectorField laplacian(const VectorField& v) const;
  /// omega^{j,k} = d_k u^j - d_j u^k. Empty (dim 1) in 1D.
  AntisymmetricField antisym_grad(const VectorField& u) const;
  /// Full velocity gradient: result[j] = grad(u^j).
  std::vector<VectorField> gradient_tensor(const VectorField& u) const;

  /// mu lap z + (mu + lambda) grad div z with this scheme's operators.
  VectorField apply_lame(const VectorField& z, const ViscosityParams& visc) const;

  /// Solves mu lap z + (lambda + mu) grad div z = rhs on the torus by
  /// inverting the symbol -mu |k|^2 I - (lambda + mu) k k^T mode by mode.
  /// The rhs mean is removed first (and reported); z has zero mean. Modes
  /// sitting on a Nyquist wavenumber are not resolved and are set to zero.
  /// Independent of the scheme: always spectral.
  LameSolution solve_lame_periodic(const VectorField& rhs, const ViscosityParams& visc) const;

 private:
  ScalarField stencil_first(const ScalarField& f, int axis) const;
  ScalarField stencil_second(const ScalarField& f, int axis) const;

  Grid grid_;
  Scheme scheme_;
  std::unique_ptr<SpectralTransform> fft_;
};

}  // namespace lgf
