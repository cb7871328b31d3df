#include "lgf/field.hpp"

#include <algorithm>
#include <cmath>

#include "lgf/errors.hpp"

namespace lgf {

Grid::Grid(int dim, int n_per_axis, double length) : dim_(dim), n_(n_per_axis), length_(length) {
  if (dim != 1 && dim != 3) throw ParameterError("grid.dim must be 1 or 3");
  if (n_per_axis < 8) throw ParameterError("grid.N >= 8 violated");
  if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("grid.L > 0 violated");
  points_ = 1;
  for (int d = 0; d < dim; ++d) points_ *= static_cast<std::size_t>(n_per_axis);
}

double Grid::volume() const { return std::pow(length_, dim_); }

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int d = axis + 1; d < dim_; ++d) s *= static_cast<std::size_t>(n_);
  return s;
}

std::array<int, 3> Grid::unflatten(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    out[d] = static_cast<int>(idx % static_cast<std::size_t>(n_));
    idx /= static_cast<std::size_t>(n_);
  }
  return out;
}

std::array<double, 3> Grid::position(std::size_t idx) const {
  const auto i = unflatten(idx);
  return {coord(i[0]), coord(i[1]), coord(i[2])};
}

ScalarField::ScalarField(const Grid& grid, double value)
    : grid_(grid), values_(grid.points(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.points()) throw ParameterError("scalar field size does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double r = 0.0;
  for (double v : values_) r = std::max(r, std::abs(v));
  return r;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

VectorField::VectorField(const Grid& grid, double value)
    : grid_(grid), data_(grid.points() * static_cast<std::size_t>(grid.dim()), value) {}

std::span<double> VectorField::component(int d) {
  return std::span<double>(data_).subspan(static_cast<std::size_t>(d) * grid_.points(),
                                          grid_.points());
}

std::span<const double> VectorField::component(int d) const {
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(d) * grid_.points(),
                                                grid_.points());
}

ScalarField VectorField::component_field(int d) const {
  auto c = component(d);
  return ScalarField(grid_, std::vector<double>(c.begin(), c.end()));
}

void VectorField::set_component(int d, const ScalarField& f) {
  std::copy(f.values().begin(), f.values().end(), component(d).begin());
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

double VectorField::max_norm() const {
  double r = 0.0;
  for (std::size_t i = 0; i < grid_.points(); ++i) {
    double s = 0.0;
    for (int d = 0; d < components(); ++d) {
      const double v = component(d)[i];
      s += v * v;
    }
    r = std::max(r, s);
  }
  return std::sqrt(r);
}

double VectorField::max_abs() const {
  double r = 0.0;
  for (double v : data_) r = std::max(r, std::abs(v));
  return r;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

VectorField operator*(const ScalarField& f, VectorField v) {
  for (int d = 0; d < v.components(); ++d) {
    auto c = v.component(d);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= f[i];
  }
  return v;
}

void check_same_grid(const FlowState& s) {
  if (!(s.m.grid() == s.n.grid()) || !(s.m.grid() == s.u.grid())) {
    throw ParameterError("flow state fields live on different grids");
  }
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f) { return f.grid().cell_volume() * pairwise_sum(f.values()); }

double l2_norm(const ScalarField& f) { return std::sqrt(integrate(f * f)); }

double l2_norm(const VectorField& v) {
  double s = 0.0;
  for (int d = 0; d < v.components(); ++d) {
    const auto c = v.component_field(d);
    s += integrate(c * c);
  }
  return std::sqrt(s);
}

}  // namespace lgf
