#include "qflk/grid.hpp"

#include <cmath>

#include "qflk/errors.hpp"

namespace qflk {

TorusGrid::TorusGrid(int dim, int n_per_axis) : dim_(dim), n_(n_per_axis) {
  if (dim < 1 || dim > 3) throw ConfigError("TorusGrid: dim must be 1, 2 or 3");
  if (n_ < 8 || n_ % 2 != 0) throw ConfigError("TorusGrid: n_per_axis must be even and >= 8");
  num_points_ = 1;
  for (int a = 0; a < dim_; ++a) num_points_ *= static_cast<std::size_t>(n_);
  spec_size_ = num_points_ / n_ * (n_ / 2 + 1);
  cell_volume_ = std::pow(2.0 * M_PI / n_, dim_);
}

double TorusGrid::volume() const { return std::pow(2.0 * M_PI, dim_); }

std::array<double, 3> TorusGrid::point(std::size_t flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = 2.0 * M_PI / n_;
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(flat % n_);
    flat /= n_;
  }
  return x;
}

std::array<int, 3> TorusGrid::wavevector(std::size_t flat_spec) const {
  std::array<int, 3> k{0, 0, 0};
  const int n_last = n_ / 2 + 1;
  k[dim_ - 1] = static_cast<int>(flat_spec % n_last);
  flat_spec /= n_last;
  for (int a = dim_ - 2; a >= 0; --a) {
    k[a] = wavenumber(static_cast<int>(flat_spec % n_));
    flat_spec /= n_;
  }
  return k;
}

}  // namespace qflk
