#include "qflk/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace qflk::fft {
namespace {

// FFTW plans are cached per grid shape. The planner is not thread-safe and
// the cached buffers are shared, so a single mutex serializes transforms;
// independent simulations still parallelize over everything outside the FFT.
struct PlanSet {
  std::size_t n_real = 0;
  std::size_t n_spec = 0;
  std::size_t n_full = 0;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_complex* full_in = nullptr;
  fftw_complex* full_out = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_fwd = nullptr;
  fftw_plan c2c_bwd = nullptr;
};

std::mutex g_mutex;
std::map<std::pair<int, int>, PlanSet>& registry() {
  static std::map<std::pair<int, int>, PlanSet> r;
  return r;
}

PlanSet& plans_for(const TorusGrid& g) {
  auto key = std::make_pair(g.dim(), g.n());
  auto& reg = registry();
  auto it = reg.find(key);
  if (it != reg.end()) return it->second;

  PlanSet p;
  p.n_real = g.num_points();
  p.n_spec = g.spec_size();
  p.n_full = g.num_points();
  p.real_buf = fftw_alloc_real(p.n_real);
  p.spec_buf = fftw_alloc_complex(p.n_spec);
  p.full_in = fftw_alloc_complex(p.n_full);
  p.full_out = fftw_alloc_complex(p.n_full);

  int dims[3] = {g.n(), g.n(), g.n()};
  p.r2c = fftw_plan_dft_r2c(g.dim(), dims, p.real_buf, p.spec_buf, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r(g.dim(), dims, p.spec_buf, p.real_buf, FFTW_ESTIMATE);
  p.c2c_fwd = fftw_plan_dft(g.dim(), dims, p.full_in, p.full_out, FFTW_FORWARD, FFTW_ESTIMATE);
  p.c2c_bwd = fftw_plan_dft(g.dim(), dims, p.full_in, p.full_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return reg.emplace(key, p).first->second;
}

}  // namespace

std::vector<std::complex<double>> forward(const TorusGrid& g, const std::vector<double>& values) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(g);
  std::memcpy(p.real_buf, values.data(), p.n_real * sizeof(double));
  fftw_execute(p.r2c);
  std::vector<std::complex<double>> spec(p.n_spec);
  const double scale = 1.0 / static_cast<double>(p.n_real);
  for (std::size_t i = 0; i < p.n_spec; ++i)
    spec[i] = std::complex<double>(p.spec_buf[i][0] * scale, p.spec_buf[i][1] * scale);
  return spec;
}

std::vector<double> inverse(const TorusGrid& g, const std::vector<std::complex<double>>& spec) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(g);
  for (std::size_t i = 0; i < p.n_spec; ++i) {
    p.spec_buf[i][0] = spec[i].real();
    p.spec_buf[i][1] = spec[i].imag();
  }
  fftw_execute(p.c2r);
  return std::vector<double>(p.real_buf, p.real_buf + p.n_real);
}

std::vector<std::complex<double>> forward_c(const TorusGrid& g,
                                            const std::vector<std::complex<double>>& values) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(g);
  const double scale = 1.0 / static_cast<double>(p.n_full);
  for (std::size_t i = 0; i < p.n_full; ++i) {
    p.full_in[i][0] = values[i].real();
    p.full_in[i][1] = values[i].imag();
  }
  fftw_execute(p.c2c_fwd);
  std::vector<std::complex<double>> out(p.n_full);
  for (std::size_t i = 0; i < p.n_full; ++i)
    out[i] = std::complex<double>(p.full_out[i][0] * scale, p.full_out[i][1] * scale);
  return out;
}

std::vector<std::complex<double>> inverse_c(const TorusGrid& g,
                                            const std::vector<std::complex<double>>& spec) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(g);
  for (std::size_t i = 0; i < p.n_full; ++i) {
    p.full_in[i][0] = spec[i].real();
    p.full_in[i][1] = spec[i].imag();
  }
  fftw_execute(p.c2c_bwd);
  std::vector<std::complex<double>> out(p.n_full);
  for (std::size_t i = 0; i < p.n_full; ++i)
    out[i] = std::complex<double>(p.full_out[i][0], p.full_out[i][1]);
  return out;
}

}  // namespace qflk::fft
