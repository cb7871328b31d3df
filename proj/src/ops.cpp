#include "lgf/ops.hpp"

#include <fftw3.h>

#include <complex>
#include <numbers>
#include <cstring>

#include "lgf/errors.hpp"

namespace lgf {

using cplx = std::complex<double>;

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

/// r2c/c2r transforms on one grid plus the wavenumber tables. Plans are
/// built once with FFTW_ESTIMATE (deterministic) and executed with the
/// new-array interface on per-call buffers, so execution is reentrant.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid) : grid_(grid) {
    const int dim = grid.dim();
    const int n = grid.n();
    const int half = n / 2 + 1;
    complex_count_ = static_cast<std::size_t>(half);
    for (int d = 0; d < dim - 1; ++d) complex_count_ *= static_cast<std::size_t>(n);

    std::array<int, 3> shape{n, n, n};
    auto real_buf = fftw_alloc<double>(grid.points());
    auto cplx_buf = fftw_alloc<fftw_complex>(complex_count_);
    forward_ = fftw_plan_dft_r2c(dim, shape.data(), real_buf.get(), cplx_buf.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r(dim, shape.data(), cplx_buf.get(), real_buf.get(), FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) throw Error("FFTW planning failed");

    const double base = 2.0 * std::numbers::pi / grid.length();
    for (int d = 0; d < 3; ++d) k_[d].assign(complex_count_, 0.0);
    dealias_.assign(complex_count_, 1.0);
    nyquist_.assign(complex_count_, 0);
    for (std::size_t c = 0; c < complex_count_; ++c) {
      // Complex index layout: [n]...[n][half], last axis fastest.
      std::array<int, 3> idx{0, 0, 0};
      std::size_t rem = c;
      idx[dim - 1] = static_cast<int>(rem % static_cast<std::size_t>(half));
      rem /= static_cast<std::size_t>(half);
      for (int d = dim - 2; d >= 0; --d) {
        idx[d] = static_cast<int>(rem % static_cast<std::size_t>(n));
        rem /= static_cast<std::size_t>(n);
      }
      for (int d = 0; d < dim; ++d) {
        int kk = idx[d];
        if (d < dim - 1 && kk > n / 2) kk -= n;
        const bool nyq = (n % 2 == 0) && (std::abs(kk) == n / 2);
        if (nyq) nyquist_[c] = 1;
        k_[d][c] = nyq ? 0.0 : base * kk;
        if (3 * std::abs(kk) >= n) dealias_[c] = 0.0;
      }
    }
  }

  ~SpectralTransform() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  std::size_t complex_count() const { return complex_count_; }
  double k(int axis, std::size_t c) const { return k_[axis][c]; }
  double dealias(std::size_t c) const { return dealias_[c]; }
  bool nyquist(std::size_t c) const { return nyquist_[c] != 0; }

  FftwBuffer<fftw_complex> forward(std::span<const double> in) const {
    auto real_buf = fftw_alloc<double>(grid_.points());
    std::memcpy(real_buf.get(), in.data(), sizeof(double) * grid_.points());
    auto out = fftw_alloc<fftw_complex>(complex_count_);
    fftw_execute_dft_r2c(forward_, real_buf.get(), out.get());
    return out;
  }

  /// Consumes (overwrites) spec; writes the normalized inverse into out.
  void inverse(FftwBuffer<fftw_complex>& spec, std::span<double> out) const {
    auto real_buf = fftw_alloc<double>(grid_.points());
    fftw_execute_dft_c2r(inverse_, spec.get(), real_buf.get());
    const double scale = 1.0 / static_cast<double>(grid_.points());
    for (std::size_t i = 0; i < grid_.points(); ++i) out[i] = real_buf[i] * scale;
  }

  FftwBuffer<fftw_complex> zeros() const {
    auto out = fftw_alloc<fftw_complex>(complex_count_);
    std::memset(out.get(), 0, sizeof(fftw_complex) * complex_count_);
    return out;
  }

  FftwBuffer<fftw_complex> copy(const FftwBuffer<fftw_complex>& src) const {
    auto out = fftw_alloc<fftw_complex>(complex_count_);
    std::memcpy(out.get(), src.get(), sizeof(fftw_complex) * complex_count_);
    return out;
  }

  static cplx* as_complex(FftwBuffer<fftw_complex>& b) { return reinterpret_cast<cplx*>(b.get()); }

 private:
  Grid grid_;
  std::size_t complex_count_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
  std::array<std::vector<double>, 3> k_;
  std::vector<double> dealias_;
  std::vector<char> nyquist_;
};

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::spectral: return "spectral";
    case SchemeKind::central2: return "central2";
    case SchemeKind::central4: return "central4";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(const std::string& s) {
  if (s == "spectral") return SchemeKind::spectral;
  if (s == "central2") return SchemeKind::central2;
  if (s == "central4") return SchemeKind::central4;
  throw ParameterError("unknown scheme kind '" + s + "' (expected spectral, central2 or central4)");
}

AntisymmetricField::AntisymmetricField(const Grid& grid)
    : dim_(grid.dim()), entries_(9, ScalarField(grid)) {}

void AntisymmetricField::set(int j, int k, const ScalarField& f) {
  entries_[j * 3 + k] = f;
  entries_[k * 3 + j] = -1.0 * f;
}

Operators::Operators(const Grid& grid, Scheme scheme)
    : grid_(grid), scheme_(scheme), fft_(std::make_unique<SpectralTransform>(grid)) {
  if (scheme.kind == SchemeKind::central4 && grid.n() < 16) {
    throw ParameterError("central4 requires grid.N >= 16");
  }
}

Operators::~Operators() = default;
Operators::Operators(Operators&&) noexcept = default;
Operators& Operators::operator=(Operators&&) noexcept = default;

ScalarField Operators::stencil_first(const ScalarField& f, int axis) const {
  const int n = grid_.n();
  const std::size_t stride = grid_.stride(axis);
  const double h = grid_.spacing();
  ScalarField out(grid_);
  auto at = [&](std::size_t idx, int i, int off) {
    int j = i + off;
    if (j < 0) j += n;
    if (j >= n) j -= n;
    return f[idx + (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(stride)];
  };
  for (std::size_t idx = 0; idx < grid_.points(); ++idx) {
    const int i = static_cast<int>((idx / stride) % static_cast<std::size_t>(n));
    if (scheme_.kind == SchemeKind::central2) {
      out[idx] = (at(idx, i, 1) - at(idx, i, -1)) / (2.0 * h);
    } else {
      out[idx] = (-at(idx, i, 2) + 8.0 * at(idx, i, 1) - 8.0 * at(idx, i, -1) + at(idx, i, -2)) /
                 (12.0 * h);
    }
  }
  return out;
}

ScalarField Operators::stencil_second(const ScalarField& f, int axis) const {
  const int n = grid_.n();
  const std::size_t stride = grid_.stride(axis);
  const double h2 = grid_.spacing() * grid_.spacing();
  ScalarField out(grid_);
  auto at = [&](std::size_t idx, int i, int off) {
    int j = i + off;
    if (j < 0) j += n;
    if (j >= n) j -= n;
    return f[idx + (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(stride)];
  };
  for (std::size_t idx = 0; idx < grid_.points(); ++idx) {
    const int i = static_cast<int>((idx / stride) % static_cast<std::size_t>(n));
    if (scheme_.kind == SchemeKind::central2) {
      out[idx] = (at(idx, i, 1) - 2.0 * f[idx] + at(idx, i, -1)) / h2;
    } else {
      out[idx] = (-at(idx, i, 2) + 16.0 * at(idx, i, 1) - 30.0 * f[idx] + 16.0 * at(idx, i, -1) -
                  at(idx, i, -2)) /
                 (12.0 * h2);
    }
  }
  return out;
}

ScalarField Operators::derivative(const ScalarField& f, int axis) const {
  if (scheme_.kind != SchemeKind::spectral) return stencil_first(f, axis);
  auto spec = fft_->forward(f.values());
  cplx* s = SpectralTransform::as_complex(spec);
  const bool dealias = scheme_.dealias;
  for (std::size_t c = 0; c < fft_->complex_count(); ++c) {
    const double mask = dealias ? fft_->dealias(c) : 1.0;
    s[c] *= cplx(0.0, fft_->k(axis, c) * mask);
  }
  ScalarField out(grid_);
  fft_->inverse(spec, out.values());
  return out;
}

VectorField Operators::grad(const ScalarField& f) const {
  VectorField out(grid_);
  if (scheme_.kind != SchemeKind::spectral) {
    for (int d = 0; d < grid_.dim(); ++d) out.set_component(d, stencil_first(f, d));
    return out;
  }
  const auto spec = fft_->forward(f.values());
  for (int d = 0; d < grid_.dim(); ++d) {
    auto work = fft_->copy(spec);
    cplx* s = SpectralTransform::as_complex(work);
    for (std::size_t c = 0; c < fft_->complex_count(); ++c) {
      const double mask = scheme_.dealias ? fft_->dealias(c) : 1.0;
      s[c] *= cplx(0.0, fft_->k(d, c) * mask);
    }
    fft_->inverse(work, out.component(d));
  }
  return out;
}

ScalarField Operators::div(const VectorField& v) const {
  ScalarField out(grid_);
  if (scheme_.kind != SchemeKind::spectral) {
    for (int d = 0; d < grid_.dim(); ++d) out += stencil_first(v.component_field(d), d);
    return out;
  }
  auto acc = fft_->zeros();
  cplx* a = SpectralTransform::as_complex(acc);
  for (int d = 0; d < grid_.dim(); ++d) {
    auto spec = fft_->forward(v.component(d));
    const cplx* s = SpectralTransform::as_complex(spec);
    for (std::size_t c = 0; c < fft_->complex_count(); ++c) {
      const double mask = scheme_.dealias ? fft_->dealias(c) : 1.0;
      a[c] += s[c] * cplx(0.0, fft_->k(d, c) * mask);
    }
  }
  fft_->inverse(acc, out.values());
  return out;
}

ScalarField Operators::laplacian(const ScalarField& f) const {
  ScalarField out(grid_);
  if (scheme_.kind != SchemeKind::spectral) {
    for (int d = 0; d < grid_.dim(); ++d) out += stencil_second(f, d);
    return out;
  }
  auto spec = fft_->forward(f.values());
  cplx* s = SpectralTransform::as_complex(spec);
  for (std::size_t c = 0; c < fft_->complex_count(); ++c) {
    double k2 = 0.0;
    for (int d = 0; d < grid_.dim(); ++d) k2 += fft_->k(d, c) * fft_->k(d, c);
    const double mask = scheme_.dealias ? fft_->dealias(c) : 1.0;
    s[c] *= -k2 * mask;
  }
  fft_->inverse(spec, out.values());
  return out;
}

VectorField Operators::laplacian(const VectorField& v) const {
  VectorField out(grid_);
  for (int d = 0; d < grid_.dim(); ++d) out.set_component(d, laplacian(v.component_field(d)));
  return out;
}

std::vector<VectorField> Operators::gradient_tensor(const VectorField& u) const {
  std::vector<VectorField> out;
  out.reserve(static_cast<std::size_t>(grid_.dim()));
  for (int j = 0; j < grid_.dim(); ++j) out.push_back(grad(u.component_field(j)));
  return out;
}

AntisymmetricField Operators::antisym_grad(const VectorField& u) const {
  AntisymmetricField omega(grid_);
  if (grid_.dim() == 1) return omega;
  const auto g = gradient_tensor(u);
  for (int j = 0; j < 3; ++j) {
    for (int k = j + 1; k < 3; ++k) {
      // d_k u^j - d_j u^k
      ScalarField w(grid_);
      const auto a = g[j].component(k);
      const auto b = g[k].component(j);
      for (std::size_t i = 0; i < grid_.points(); ++i) w[i] = a[i] - b[i];
      omega.set(j, k, w);
    }
  }
  return omega;
}

VectorField Operators::apply_lame(const VectorField& z, const ViscosityParams& visc) const {
  VectorField out = visc.mu() * laplacian(z);
  out += (visc.mu() + visc.lambda()) * grad(div(z));
  return out;
}

LameSolution Operators::solve_lame_periodic(const VectorField& rhs,
                                            const ViscosityParams& visc) const {
  const int dim = grid_.dim();
  const double mu = visc.mu();
  const double beta = -(visc.lambda() + mu);
  if (!(mu > 0.0) || !(2.0 * mu + visc.lambda() > 0.0)) {
    throw ParameterError("Lame operator is singular for these viscosities");
  }
  LameSolution sol{VectorField(grid_), {0.0, 0.0, 0.0}};
  std::vector<FftwBuffer<fftw_complex>> spec;
  for (int d = 0; d < dim; ++d) {
    spec.push_back(fft_->forward(rhs.component(d)));
    cplx* s = SpectralTransform::as_complex(spec.back());
    sol.subtracted_means[d] = s[0].real() / static_cast<double>(grid_.points());
    s[0] = 0.0;
  }
  std::array<cplx*, 3> s{nullptr, nullptr, nullptr};
  for (int d = 0; d < dim; ++d) s[d] = SpectralTransform::as_complex(spec[d]);

  for (std::size_t c = 0; c < fft_->complex_count(); ++c) {
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) k2 += fft_->k(d, c) * fft_->k(d, c);
    if (c == 0 || fft_->nyquist(c) || k2 == 0.0) {
      for (int d = 0; d < dim; ++d) s[d][c] = 0.0;
      continue;
    }
    // (alpha I + beta k k^T)^{-1} = (I - beta k k^T / (alpha + beta |k|^2)) / alpha
    const double alpha = -mu * k2;
    const double denom = alpha + beta * k2;
    cplx kdotr = 0.0;
    for (int d = 0; d < dim; ++d) kdotr += fft_->k(d, c) * s[d][c];
    for (int d = 0; d < dim; ++d) {
      s[d][c] = (s[d][c] - beta * fft_->k(d, c) * kdotr / denom) / alpha;
    }
  }
  for (int d = 0; d < dim; ++d) fft_->inverse(spec[d], sol.z.component(d));
  return sol;
}

}  // namespace lgf
