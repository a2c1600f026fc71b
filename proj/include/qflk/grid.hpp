#ifndef QFLK_GRID_HPP
#define QFLK_GRID_HPP

#include <array>
#include <cstddef>

namespace qflk {

/// Uniform periodic grid on [0,2pi)^dim with integer Fourier wavenumbers.
/// The domain length is fixed to 2*pi per axis so that spectral symbols are
/// exact integer arithmetic.
class TorusGrid {
 public:
  TorusGrid(int dim, int n_per_axis);

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t num_points() const { return num_points_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const;  // (2*pi)^dim

  /// Number of complex coefficients in the half-spectrum (r2c layout,
  /// last axis truncated to n/2+1).
  std::size_t spec_size() const { return spec_size_; }

  /// Integer wavenumber for a physical-axis index in [0,n).
  int wavenumber(int index) const { return index <= n_ / 2 ? index : index - n_; }

  /// Coordinates of a flat (row-major, last axis fastest) point index.
  std::array<double, 3> point(std::size_t flat) const;

  /// Integer wavenumbers of a flat half-spectrum index; unused axes are 0.
  std::array<int, 3> wavevector(std::size_t flat_spec) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }
  friend bool operator!=(const TorusGrid& a, const TorusGrid& b) { return !(a == b); }

 private:
  int dim_;
  int n_;
  std::size_t num_points_;
  std::size_t spec_size_;
  double cell_volume_;
};

}  // namespace qflk

#endif
