#include "qflk/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace qflk::io {

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

Snapshot pack(const std::vector<const ScalarField*>& fields) {
  if (fields.empty()) throw ConfigError("cannot pack an empty snapshot");
  const TorusGrid& g = fields[0]->grid();
  Snapshot snap(g, static_cast<int>(fields.size()));
  for (std::size_t c = 0; c < fields.size(); ++c) {
    if (!(fields[c]->grid() == g)) throw GridMismatchError("snapshot components on mixed grids");
    for (std::size_t i = 0; i < g.num_points(); ++i)
      snap.data[i * fields.size() + c] = (*fields[c])[i];
  }
  return snap;
}

ScalarField unpack(const Snapshot& snap, int comp) {
  if (comp < 0 || comp >= snap.comps) throw ConfigError("snapshot component out of range");
  ScalarField f(snap.grid);
  for (std::size_t i = 0; i < snap.grid.num_points(); ++i)
    f[i] = snap.data[i * snap.comps + comp];
  return f;
}

void write_qfld(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "QFLD1 dim=" << snap.grid.dim() << " n=" << snap.grid.n() << " comps=" << snap.comps
      << "\n";
  out.write(reinterpret_cast<const char*>(snap.data.data()),
            static_cast<std::streamsize>(snap.data.size() * sizeof(double)));
  if (!out) throw ConfigError("short write: " + path);
}

Snapshot read_qfld(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingDataError("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, kd, kn, kc;
  hs >> magic >> kd >> kn >> kc;
  int dim = 0, n = 0, comps = 0;
  if (magic != "QFLD1" || std::sscanf(kd.c_str(), "dim=%d", &dim) != 1 ||
      std::sscanf(kn.c_str(), "n=%d", &n) != 1 || std::sscanf(kc.c_str(), "comps=%d", &comps) != 1)
    throw MissingDataError("bad snapshot header in " + path);
  if (comps < 1) throw MissingDataError("bad component count in " + path);
  Snapshot snap(TorusGrid(dim, n), comps);
  in.read(reinterpret_cast<char*>(snap.data.data()),
          static_cast<std::streamsize>(snap.data.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(snap.data.size() * sizeof(double)))
    throw MissingDataError("truncated snapshot: " + path);
  return snap;
}

Snapshot pack_fluid(const FluidState& s) {
  std::vector<const ScalarField*> fields{&s.rho};
  for (int a = 0; a < s.grid().dim(); ++a) fields.push_back(&s.u[a]);
  return pack(fields);
}

Snapshot pack_aug(const AugmentedState& s) {
  std::vector<const ScalarField*> fields{&s.rho};
  for (int a = 0; a < s.grid().dim(); ++a) fields.push_back(&s.w[a]);
  for (int a = 0; a < s.grid().dim(); ++a) fields.push_back(&s.vbar[a]);
  return pack(fields);
}

FluidState unpack_fluid(const Snapshot& snap, double time) {
  const int d = snap.grid.dim();
  if (snap.comps < d + 1) throw MissingDataError("snapshot lacks velocity components");
  ScalarField rho = unpack(snap, 0);
  VectorField u(snap.grid);
  for (int a = 0; a < d; ++a) u[a] = unpack(snap, a + 1);
  return FluidState(rho, u, time);
}

void write_reports_csv(const std::string& path, const std::vector<EntropyReport>& reports) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << EntropyReport::csv_header() << "\n";
  for (const EntropyReport& r : reports) out << r.csv_row() << "\n";
}

}  // namespace qflk::io
