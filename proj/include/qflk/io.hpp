#ifndef QFLK_IO_HPP
#define QFLK_IO_HPP

#include <string>
#include <vector>

#include "qflk/functionals.hpp"
#include "qflk/state.hpp"

namespace qflk::io {

/// Snapshot container: named interleaved components on one grid.
/// File layout: one ASCII header line "QFLD1 dim=<d> n=<n> comps=<c>\n"
/// followed by little-endian float64 samples, points in row-major order with
/// the components of each point adjacent.
struct Snapshot {
  TorusGrid grid;
  int comps = 0;
  std::vector<double> data;  // num_points * comps, component-fastest

  Snapshot(const TorusGrid& g, int c) : grid(g), comps(c), data(g.num_points() * c, 0.0) {}
};

Snapshot pack(const std::vector<const ScalarField*>& fields);
ScalarField unpack(const Snapshot& snap, int comp);

void write_qfld(const std::string& path, const Snapshot& snap);
Snapshot read_qfld(const std::string& path);

Snapshot pack_fluid(const FluidState& s);
Snapshot pack_aug(const AugmentedState& s);
FluidState unpack_fluid(const Snapshot& snap, double time = 0.0);

void write_reports_csv(const std::string& path, const std::vector<EntropyReport>& reports);

}  // namespace qflk::io

#endif
