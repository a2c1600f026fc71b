#ifndef QFLK_FIELD_HPP
#define QFLK_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qflk/errors.hpp"
#include "qflk/grid.hpp"

namespace qflk {

/// Real scalar field sampled on a TorusGrid, row-major, last axis fastest.
class ScalarField {
 public:
  explicit ScalarField(const TorusGrid& grid, double fill = 0.0)
      : grid_(grid), v_(grid.num_points(), fill) {}

  const TorusGrid& grid() const { return grid_; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  double min() const { return *std::min_element(v_.begin(), v_.end()); }
  double max() const { return *std::max_element(v_.begin(), v_.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
  }
  bool finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  ScalarField& operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  ScalarField& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

 private:
  TorusGrid grid_;
  std::vector<double> v_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double c, ScalarField a) { return a *= c; }

inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

inline ScalarField map(const ScalarField& a, const std::function<double(double)>& f) {
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f(a[i]);
  return r;
}

/// Samples f(x) on the grid; f receives the point coordinates (unused axes 0).
inline ScalarField sample(const TorusGrid& g,
                          const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField r(g);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f(g.point(i));
  return r;
}

/// Vector field: dim scalar components on one grid.
class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid) : grid_(grid), comp_(grid.dim(), ScalarField(grid)) {}

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  ScalarField& operator[](int a) { return comp_[a]; }
  const ScalarField& operator[](int a) const { return comp_[a]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comp_) m = std::max(m, c.max_abs());
    return m;
  }
  bool finite() const {
    for (const auto& c : comp_)
      if (!c.finite()) return false;
    return true;
  }

  VectorField& operator+=(const VectorField& o) {
    for (int a = 0; a < dim(); ++a) comp_[a] += o.comp_[a];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    for (int a = 0; a < dim(); ++a) comp_[a] -= o.comp_[a];
    return *this;
  }
  VectorField& operator*=(double c) {
    for (auto& f : comp_) f *= c;
    return *this;
  }

 private:
  TorusGrid grid_;
  std::vector<ScalarField> comp_;
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double c, VectorField a) { return a *= c; }

/// |v|^2 pointwise.
inline ScalarField norm2(const VectorField& v) {
  ScalarField r(v.grid());
  for (int a = 0; a < v.dim(); ++a)
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += v[a][i] * v[a][i];
  return r;
}

inline ScalarField dot(const VectorField& v, const VectorField& w) {
  ScalarField r(v.grid());
  for (int a = 0; a < v.dim(); ++a)
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += v[a][i] * w[a][i];
  return r;
}

inline VectorField scale(const ScalarField& s, const VectorField& v) {
  VectorField r(v.grid());
  for (int a = 0; a < v.dim(); ++a) r[a] = s * v[a];
  return r;
}

/// Tensor field: dim x dim components (row i, column j at index i*dim+j).
class TensorField {
 public:
  explicit TensorField(const TorusGrid& grid)
      : grid_(grid), comp_(grid.dim() * grid.dim(), ScalarField(grid)) {}

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  ScalarField& at(int i, int j) { return comp_[i * dim() + j]; }
  const ScalarField& at(int i, int j) const { return comp_[i * dim() + j]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comp_) m = std::max(m, c.max_abs());
    return m;
  }

 private:
  TorusGrid grid_;
  std::vector<ScalarField> comp_;
};

/// sigma : sigma pointwise (squared Frobenius norm).
inline ScalarField norm2(const TensorField& t) {
  ScalarField r(t.grid());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) {
      const ScalarField& c = t.at(i, j);
      for (std::size_t p = 0; p < r.size(); ++p) r[p] += c[p] * c[p];
    }
  return r;
}

/// u tensor v.
inline TensorField outer(const VectorField& u, const VectorField& v) {
  TensorField t(u.grid());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) t.at(i, j) = u[i] * v[j];
  return t;
}

}  // namespace qflk

#endif
