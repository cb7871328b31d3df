#pragma once

/// @file field.hpp
/// @brief Periodic cubic grid and the scalar/vector fields that live on it.
///
/// Storage is row-major by axis order (axis 0 slowest). Vector fields keep
/// their components as consecutive axis-major blocks, so component d
/// occupies [d * points, (d + 1) * points).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace lgf {

class Grid {
 public:
  /// dim in {1, 3}, n_per_axis >= 8, length > 0; ParameterError otherwise.
  Grid(int dim, int n_per_axis, double length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  std::size_t points() const { return points_; }
  double volume() const;
  /// Volume element h^dim used by integrate().
  double cell_volume() const;

  /// Coordinate of grid index i along an axis.
  double coord(int i) const { return i * spacing(); }
  /// Per-axis indices of the flat index (unused axes are 0).
  std::array<int, 3> unflatten(std::size_t idx) const;
  /// Physical position of the flat index (unused axes are 0).
  std::array<double, 3> position(std::size_t idx) const;
  std::size_t stride(int axis) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

 private:
  int dim_;
  int n_;
  double length_;
  std::size_t points_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  double min() const;
  double max() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  explicit VectorField(const Grid& grid, double value = 0.0);

  const Grid& grid() const { return grid_; }
  int components() const { return grid_.dim(); }
  std::span<double> component(int d);
  std::span<const double> component(int d) const;
  ScalarField component_field(int d) const;
  void set_component(int d, const ScalarField& f);
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

  /// max over points of the Euclidean norm.
  double max_norm() const;
  /// max over all entries of |value|.
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
/// Scales every component pointwise by f.
VectorField operator*(const ScalarField& f, VectorField v);

/// The evolving unknowns: liquid mass m, gas mass n, velocity u at time t.
struct FlowState {
  ScalarField m;
  ScalarField n;
  VectorField u;
  double t = 0.0;

  const Grid& grid() const { return m.grid(); }
};

/// Throws ParameterError unless m, n and u share one grid.
void check_same_grid(const FlowState& s);

/// Sum of all values by pairwise summation.
double pairwise_sum(std::span<const double> v);

/// h^dim * sum of values: the periodic trapezoid rule.
double integrate(const ScalarField& f);

/// sqrt(integrate(f^2)).
double l2_norm(const ScalarField& f);
/// sqrt(sum_d integrate(v_d^2)).
double l2_norm(const VectorField& v);

}  // namespace lgf
