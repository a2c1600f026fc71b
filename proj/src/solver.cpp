#include "qflk/solver.hpp"

#include <cmath>
#include <complex>

#include "qflk/fft.hpp"
#include "qflk/spectral.hpp"

namespace qflk::solver {

namespace {

using functionals::RelEntropy;

ScalarField ds(ScalarField f, bool on) { return on ? spectral::dealias(f) : std::move(f); }
VectorField ds(VectorField v, bool on) { return on ? spectral::dealias(v) : std::move(v); }

VectorField velocity_from(const ScalarField& rho, const VectorField& m, double floor) {
  check_density(rho, floor);
  VectorField u(rho.grid());
  const int d = rho.grid().dim();
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < rho.grid().num_points(); ++i)
      u[a][i] = m[a][i] / std::max(rho[i], floor);
  return u;
}

}  // namespace

std::size_t step_count(const SolverConfig& cfg) {
  double raw = cfg.t_end / cfg.dt;
  auto n = static_cast<std::size_t>(std::llround(raw));
  if (n == 0 || std::fabs(raw - static_cast<double>(n)) > 1e-9 * raw)
    throw ConfigError("t_end must be an integer multiple of dt");
  return n;
}

std::pair<ScalarField, VectorField> rhs_reg_nslk(const FluidState& state, const Params& p,
                                                 bool dealias) {
  const TorusGrid& g = state.grid();
  const int d = g.dim();
  const ScalarField& rho = state.rho;
  const VectorField& u = state.u;

  VectorField m(g);
  for (int a = 0; a < d; ++a) m[a] = ds(rho * u[a], dealias);

  ScalarField drho = -1.0 * spectral::divergence(m);
  if (p.delta1 != 0.0) drho += p.delta1 * spectral::laplacian(rho);

  // convection Div(rho u x u)
  TensorField conv_t(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) conv_t.at(i, j) = ds(m[i] * u[j], dealias);
  VectorField dm = -1.0 * spectral::divergence_tensor(conv_t);

  VectorField grad_rho = spectral::gradient(rho);
  dm -= p.lambda * grad_rho;
  dm -= p.mu * m;

  if (p.r0 != 0.0) dm -= p.r0 * u;
  if (p.r1 != 0.0) {
    ScalarField u2 = ds(norm2(u), dealias);
    ScalarField ru2 = ds(rho * u2, dealias);
    for (int a = 0; a < d; ++a) dm[a] -= p.r1 * ds(ru2 * u[a], dealias);
  }

  // Bohm force (hbar^2/4) Div(rho hess log rho)
  {
    ScalarField lr = guarded_log(rho, p.density_floor);
    VectorField glr = spectral::gradient(lr);
    TensorField hess(g);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) hess.at(i, j) = ds(rho * spectral::derivative(glr[i], j), dealias);
    VectorField bohm = spectral::divergence_tensor(hess);
    for (int a = 0; a < d; ++a) dm[a] += 0.25 * p.hbar * p.hbar * bohm[a];
  }

  if (p.nu != 0.0) {
    TensorField Du = spectral::sym_grad(u);
    TensorField rDu(g);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) rDu.at(i, j) = ds(rho * Du.at(i, j), dealias);
    dm += p.nu * spectral::divergence_tensor(rDu);
  }

  // -delta2 Lap^2 u (dissipative hyperviscosity)
  if (p.delta2 != 0.0)
    for (int a = 0; a < d; ++a) dm[a] -= p.delta2 * spectral::laplacian_power(u[a], 2);

  // -delta1 (grad rho . grad) u
  if (p.delta1 != 0.0)
    for (int a = 0; a < d; ++a)
      for (int j = 0; j < d; ++j)
        dm[a] -= p.delta1 * ds(grad_rho[j] * spectral::derivative(u[a], j), dealias);

  if (p.eta1 != 0.0) {
    ScalarField pa = map(rho, [&p](double r) { return std::pow(std::max(r, p.density_floor), -p.alpha); });
    dm += p.eta1 * spectral::gradient(pa);
  }

  // +eta2 rho grad Lap^(2s+1) rho
  if (p.eta2 != 0.0) {
    VectorField h = spectral::gradient(spectral::laplacian_power(rho, 2 * p.s + 1));
    for (int a = 0; a < d; ++a) dm[a] += p.eta2 * ds(rho * h[a], dealias);
  }

  return {std::move(drho), std::move(dm)};
}

std::tuple<ScalarField, VectorField, VectorField> rhs_aug_nslk(const AugmentedState& aug,
                                                               const Params& p, bool dealias) {
  const TorusGrid& g = aug.grid();
  const int d = g.dim();
  const ScalarField& rho = aug.rho;
  const VectorField& w = aug.w;
  const VectorField& vb = aug.vbar;

  ScalarField lr = guarded_log(rho, p.density_floor);
  VectorField glr = spectral::gradient(lr);
  VectorField u = w;
  if (p.nu != 0.0) u -= (p.nu / 2.0) * glr;

  VectorField m(g);
  for (int a = 0; a < d; ++a) m[a] = ds(rho * u[a], dealias);
  ScalarField drho = -1.0 * spectral::divergence(m);

  auto transport = [&](const VectorField& q) {
    TensorField t(g);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t.at(i, j) = ds(ds(rho * q[i], dealias) * u[j], dealias);
    return -1.0 * spectral::divergence_tensor(t);
  };
  auto flux = [&](const TensorField& grad_q) {
    TensorField t(g);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t.at(i, j) = ds(rho * grad_q.at(i, j), dealias);
    return spectral::divergence_tensor(t);
  };

  const double hn = p.hbar_nu();

  VectorField dmw = transport(w);
  dmw -= p.lambda_prime() * spectral::gradient(rho);
  for (int a = 0; a < d; ++a) dmw[a] -= p.mu * ds(rho * w[a], dealias);
  dmw += (hn / 2.0) * flux(spectral::gradient_tensor(vb));
  if (p.nu != 0.0) dmw += (p.nu / 2.0) * flux(spectral::gradient_tensor(w));

  // with the (nu/2) Div(rho grad vbar) dissipation split off, the transposed
  // flux must carry w, not u; both reduce to d(rho vbar)/dt =
  // -(hbar_nu/2) grad Div(rho u)
  VectorField dmv = transport(vb);
  TensorField gw = spectral::gradient_tensor(w);
  TensorField gwt(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gwt.at(i, j) = gw.at(j, i);
  dmv -= (hn / 2.0) * flux(gwt);
  if (p.nu != 0.0) dmv += (p.nu / 2.0) * flux(spectral::gradient_tensor(vb));

  return {std::move(drho), std::move(dmw), std::move(dmv)};
}

// ---------------------------------------------------------------------------
// rk4 steps in conserved variables

namespace {

struct RegStage {
  ScalarField drho;
  VectorField dm;
};

RegStage eval_reg(const ScalarField& rho, const VectorField& m, double t, const Params& p,
                  const SolverConfig& cfg) {
  FluidState s(rho, velocity_from(rho, m, cfg.density_floor), t);
  auto [dr, dm] = rhs_reg_nslk(s, p, cfg.dealias);
  return {std::move(dr), std::move(dm)};
}

FluidState rk4_reg(const FluidState& s, const Params& p, const SolverConfig& cfg) {
  const double h = cfg.dt;
  ScalarField rho0 = s.rho;
  VectorField m0(s.grid());
  for (int a = 0; a < s.grid().dim(); ++a) m0[a] = s.rho * s.u[a];

  RegStage k1 = eval_reg(rho0, m0, s.time, p, cfg);
  RegStage k2 = eval_reg(rho0 + (h / 2) * k1.drho, m0 + (h / 2) * k1.dm, s.time + h / 2, p, cfg);
  RegStage k3 = eval_reg(rho0 + (h / 2) * k2.drho, m0 + (h / 2) * k2.dm, s.time + h / 2, p, cfg);
  RegStage k4 = eval_reg(rho0 + h * k3.drho, m0 + h * k3.dm, s.time + h, p, cfg);

  ScalarField rho = rho0 + (h / 6) * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
  VectorField m = m0 + (h / 6) * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
  return FluidState(rho, velocity_from(rho, m, cfg.density_floor), s.time + h);
}

struct AugStage {
  ScalarField drho;
  VectorField dmw;
  VectorField dmv;
};

AugmentedState conserved_to_aug(const ScalarField& rho, const VectorField& mw,
                                const VectorField& mv, double t, double floor) {
  return AugmentedState(rho, velocity_from(rho, mw, floor), velocity_from(rho, mv, floor), t);
}

AugStage eval_aug(const ScalarField& rho, const VectorField& mw, const VectorField& mv, double t,
                  const Params& p, const SolverConfig& cfg) {
  AugmentedState a = conserved_to_aug(rho, mw, mv, t, cfg.density_floor);
  auto [dr, dw, dv] = rhs_aug_nslk(a, p, cfg.dealias);
  return {std::move(dr), std::move(dw), std::move(dv)};
}

AugmentedState rk4_aug(const AugmentedState& s, const Params& p, const SolverConfig& cfg) {
  const double h = cfg.dt;
  const int d = s.grid().dim();
  ScalarField rho0 = s.rho;
  VectorField mw0(s.grid()), mv0(s.grid());
  for (int a = 0; a < d; ++a) {
    mw0[a] = s.rho * s.w[a];
    mv0[a] = s.rho * s.vbar[a];
  }

  AugStage k1 = eval_aug(rho0, mw0, mv0, s.time, p, cfg);
  AugStage k2 = eval_aug(rho0 + (h / 2) * k1.drho, mw0 + (h / 2) * k1.dmw, mv0 + (h / 2) * k1.dmv,
                         s.time + h / 2, p, cfg);
  AugStage k3 = eval_aug(rho0 + (h / 2) * k2.drho, mw0 + (h / 2) * k2.dmw, mv0 + (h / 2) * k2.dmv,
                         s.time + h / 2, p, cfg);
  AugStage k4 =
      eval_aug(rho0 + h * k3.drho, mw0 + h * k3.dmw, mv0 + h * k3.dmv, s.time + h, p, cfg);

  ScalarField rho = rho0 + (h / 6) * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
  VectorField mw = mw0 + (h / 6) * (k1.dmw + 2.0 * k2.dmw + 2.0 * k3.dmw + k4.dmw);
  VectorField mv = mv0 + (h / 6) * (k1.dmv + 2.0 * k2.dmv + 2.0 * k3.dmv + k4.dmv);
  return conserved_to_aug(rho, mw, mv, s.time + h, cfg.density_floor);
}

// ---------------------------------------------------------------------------
// Trapezoidal (Crank-Nicolson) step for the stiff regularized system. The
// linear part is the constant-coefficient linearization around the mean
// density; each half-spectrum wavevector carries one (d+1)x(d+1) complex
// block whose resolvent (I - dt/2 L) is prefactored. The remainder is
// handled by preconditioned fixed-point iteration.

using cplx = std::complex<double>;

struct ImexWorkspace {
  int dim = 0;
  std::size_t spec_size = 0;
  std::vector<cplx> L;     // blocks of size D*D
  std::vector<cplx> Ainv;  // (I - dt/2 L)^-1 blocks
};

void invert_block(const cplx* a_in, cplx* out, int D) {
  std::vector<cplx> a(a_in, a_in + D * D);
  std::vector<cplx> b(D * D, cplx(0.0));
  for (int i = 0; i < D; ++i) b[i * D + i] = 1.0;
  for (int col = 0; col < D; ++col) {
    int piv = col;
    for (int r = col + 1; r < D; ++r)
      if (std::abs(a[r * D + col]) > std::abs(a[piv * D + col])) piv = r;
    if (std::abs(a[piv * D + col]) < 1e-300) throw NumericalError("singular implicit block");
    if (piv != col)
      for (int c = 0; c < D; ++c) {
        std::swap(a[piv * D + c], a[col * D + c]);
        std::swap(b[piv * D + c], b[col * D + c]);
      }
    cplx inv = 1.0 / a[col * D + col];
    for (int c = 0; c < D; ++c) {
      a[col * D + c] *= inv;
      b[col * D + c] *= inv;
    }
    for (int r = 0; r < D; ++r) {
      if (r == col) continue;
      cplx f = a[r * D + col];
      if (f == cplx(0.0)) continue;
      for (int c = 0; c < D; ++c) {
        a[r * D + c] -= f * a[col * D + c];
        b[r * D + c] -= f * b[col * D + c];
      }
    }
  }
  std::copy(b.begin(), b.end(), out);
}

ImexWorkspace build_imex(const TorusGrid& g, const Params& p, double dt, double rho_bar) {
  ImexWorkspace ws;
  const int d = g.dim();
  const int D = d + 1;
  ws.dim = d;
  ws.spec_size = g.spec_size();
  ws.L.assign(ws.spec_size * D * D, cplx(0.0));
  ws.Ainv.assign(ws.spec_size * D * D, cplx(0.0));
  const int nyq = g.n() / 2;
  std::vector<cplx> A(D * D);
  for (std::size_t f = 0; f < ws.spec_size; ++f) {
    auto kv = g.wavevector(f);
    double kk[3] = {0, 0, 0};
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      // odd-derivative factors vanish on the Nyquist mode, matching the
      // convention of the spectral operators
      kk[a] = (std::abs(kv[a]) == nyq) ? 0.0 : static_cast<double>(kv[a]);
      k2 += static_cast<double>(kv[a]) * kv[a];
    }
    cplx* L = &ws.L[f * D * D];
    // continuity row (exactly linear in the conserved variables)
    L[0] = -p.delta1 * k2;
    for (int a = 0; a < d; ++a) L[a + 1] = cplx(0.0, -kk[a]);
    // momentum rows
    // coefficient of (i k_a) rho-hat in the momentum rows: pressure, the
    // linearized cold pressure, the linearized Bohm term and the eta2 symbol
    double press = p.lambda + p.eta1 * p.alpha * std::pow(rho_bar, -p.alpha - 1.0) +
                   0.25 * p.hbar * p.hbar * k2 + p.eta2 * rho_bar * std::pow(k2, 2 * p.s + 1);
    double diag = -p.mu - (p.r0 + p.delta2 * k2 * k2) / rho_bar;
    for (int a = 0; a < d; ++a) {
      cplx* row = L + (a + 1) * D;
      row[0] = cplx(0.0, -kk[a]) * press;
      for (int b = 0; b < d; ++b) {
        row[b + 1] = (p.nu / (2.0 * rho_bar)) * (-(a == b ? k2 : 0.0) - kk[a] * kk[b]);
        if (a == b) row[b + 1] += diag;
      }
    }
    for (int i = 0; i < D * D; ++i) A[i] = -0.5 * dt * L[i];
    for (int i = 0; i < D; ++i) A[i * D + i] += 1.0;
    invert_block(A.data(), &ws.Ainv[f * D * D], D);
  }
  return ws;
}

void apply_blocks(const std::vector<cplx>& blocks, int D, std::size_t spec_size,
                  const std::vector<std::vector<cplx>>& in, std::vector<std::vector<cplx>>& out) {
  for (std::size_t f = 0; f < spec_size; ++f) {
    const cplx* B = &blocks[f * D * D];
    for (int i = 0; i < D; ++i) {
      cplx acc(0.0);
      for (int j = 0; j < D; ++j) acc += B[i * D + j] * in[j][f];
      out[i][f] = acc;
    }
  }
}

FluidState imex_cn_reg(const FluidState& s, const Params& p, const SolverConfig& cfg,
                       const ImexWorkspace& ws) {
  const TorusGrid& g = s.grid();
  const int d = g.dim();
  const int D = d + 1;
  const double h = cfg.dt;

  auto to_spec = [&](const ScalarField& rho, const VectorField& u) {
    std::vector<std::vector<cplx>> X(D);
    X[0] = fft::forward(g, rho.values());
    for (int a = 0; a < d; ++a) X[a + 1] = fft::forward(g, (rho * u[a]).values());
    return X;
  };
  auto to_state = [&](const std::vector<std::vector<cplx>>& X, double t) {
    ScalarField rho(g);
    rho.values() = fft::inverse(g, X[0]);
    VectorField m(g);
    for (int a = 0; a < d; ++a) m[a].values() = fft::inverse(g, X[a + 1]);
    return FluidState(rho, velocity_from(rho, m, cfg.density_floor), t);
  };
  auto rhs_spec = [&](const FluidState& st) {
    auto [dr, dm] = rhs_reg_nslk(st, p, cfg.dealias);
    std::vector<std::vector<cplx>> F(D);
    F[0] = fft::forward(g, dr.values());
    for (int a = 0; a < d; ++a) F[a + 1] = fft::forward(g, dm[a].values());
    return F;
  };

  std::vector<std::vector<cplx>> X0 = to_spec(s.rho, s.u);
  std::vector<std::vector<cplx>> F0 = rhs_spec(s);

  // fixed part of the update: X0 + dt/2 F(X0)
  std::vector<std::vector<cplx>> base(D);
  for (int i = 0; i < D; ++i) {
    base[i] = X0[i];
    for (std::size_t f = 0; f < ws.spec_size; ++f) base[i][f] += 0.5 * h * F0[i][f];
  }

  std::vector<std::vector<cplx>> Y = X0, LY(D), rhs(D), Ynew(D);
  for (int i = 0; i < D; ++i) {
    LY[i].resize(ws.spec_size);
    rhs[i].resize(ws.spec_size);
    Ynew[i].resize(ws.spec_size);
  }

  double scale = 0.0;
  for (int i = 0; i < D; ++i)
    for (const cplx& c : X0[i]) scale = std::max(scale, std::abs(c));

  const int max_iter = 60;
  for (int it = 0; it < max_iter; ++it) {
    FluidState ys = to_state(Y, s.time + h);
    std::vector<std::vector<cplx>> FY = rhs_spec(ys);
    apply_blocks(ws.L, D, ws.spec_size, Y, LY);
    for (int i = 0; i < D; ++i)
      for (std::size_t f = 0; f < ws.spec_size; ++f)
        rhs[i][f] = base[i][f] + 0.5 * h * (FY[i][f] - LY[i][f]);
    apply_blocks(ws.Ainv, D, ws.spec_size, rhs, Ynew);
    double diff = 0.0;
    for (int i = 0; i < D; ++i)
      for (std::size_t f = 0; f < ws.spec_size; ++f) diff = std::max(diff, std::abs(Ynew[i][f] - Y[i][f]));
    Y.swap(Ynew);
    if (diff <= 1e-12 * (1.0 + scale)) return to_state(Y, s.time + h);
  }
  throw NumericalError("implicit trapezoidal iteration failed to converge");
}

// crude largest explicit frequency for the rk4 stability guard
double rk4_frequency_reg(const TorusGrid& g, const Params& p, const SolverConfig& cfg,
                         double rho_bar) {
  double kmax = cfg.dealias ? g.n() / 3.0 : g.n() / 2.0;
  double k2 = kmax * kmax;
  double omega = kmax * std::sqrt(p.lambda + 0.25 * p.hbar * p.hbar * k2 +
                                  p.eta2 * rho_bar * std::pow(k2, 2 * p.s + 1));
  double sigma = p.delta1 * k2 + (p.delta2 * k2 * k2 + p.r0) / rho_bar + p.nu * k2 + p.mu;
  return std::sqrt(omega * omega + sigma * sigma);
}

double rk4_frequency_aug(const TorusGrid& g, const Params& p, const SolverConfig& cfg) {
  double kmax = cfg.dealias ? g.n() / 3.0 : g.n() / 2.0;
  double k2 = kmax * kmax;
  double omega = kmax * std::sqrt(p.lambda_prime() + 0.25 * p.hbar * p.hbar * k2);
  double sigma = p.mu + p.nu * k2;
  return std::sqrt(omega * omega + sigma * sigma);
}

constexpr double kRk4Budget = 2.8;
constexpr double kBlowupThreshold = 1e8;

bool blown_up(const ScalarField& f) { return !f.finite() || f.max_abs() > kBlowupThreshold; }
bool blown_up(const VectorField& v) {
  for (int a = 0; a < v.grid().dim(); ++a)
    if (blown_up(v[a])) return true;
  return false;
}

EntropyReport base_report_reg(const FluidState& s, const Params& p) {
  EntropyReport r;
  r.time = s.time;
  r.mass = s.mass();
  auto e = functionals::energy_nslk(s, p);
  r.energy_nslk = e.value;
  r.dissipation_nslk = e.dissipation;
  auto bd = functionals::bd_entropy_nslk(s, p);
  r.bd_entropy = bd.value;
  r.bd_dissipation = bd.dissipation;
  auto er = functionals::energy_reg(s, p);
  r.energy_reg = er.value;
  r.dissipation_reg = er.dissipation;
  r.bd_entropy_reg = functionals::bd_entropy_reg(s, p).value;
  try {
    r.bohm_ratio = functionals::bohm_inequality_ratio(s.rho, p);
  } catch (const DegenerateError&) {
  }
  return r;
}

}  // namespace

FluidState step_reg(const FluidState& state, const Params& p, const SolverConfig& cfg) {
  if (cfg.scheme == Scheme::rk4) return rk4_reg(state, p, cfg);
  double rho_bar = state.mass() / state.grid().volume();
  ImexWorkspace ws = build_imex(state.grid(), p, cfg.dt, rho_bar);
  return imex_cn_reg(state, p, cfg, ws);
}

AugmentedState step_aug(const AugmentedState& aug, const Params& p, const SolverConfig& cfg) {
  if (cfg.scheme != Scheme::rk4)
    throw ConfigError("the augmented system only supports the rk4 scheme");
  return rk4_aug(aug, p, cfg);
}

RunResult run_reg(FluidState& state, const Params& p, const SolverConfig& cfg,
                  const FluidObserver& observer) {
  p.validate();
  cfg.validate();
  const std::size_t nsteps = step_count(cfg);
  double rho_bar = state.mass() / state.grid().volume();
  if (cfg.scheme == Scheme::rk4 &&
      cfg.dt * rk4_frequency_reg(state.grid(), p, cfg, rho_bar) > kRk4Budget)
    throw ConfigError("dt exceeds the rk4 stability budget for these parameters");

  ImexWorkspace ws;
  if (cfg.scheme == Scheme::imex_cn) ws = build_imex(state.grid(), p, cfg.dt, rho_bar);

  RunResult out;
  out.reports.push_back(base_report_reg(state, p));
  if (observer) observer(0, state);

  for (std::size_t i = 1; i <= nsteps; ++i) {
    try {
      state = (cfg.scheme == Scheme::rk4) ? rk4_reg(state, p, cfg) : imex_cn_reg(state, p, cfg, ws);
    } catch (const VacuumError& e) {
      out.status = "vacuum";
      out.reason = e.what();
      return out;
    }
    if (blown_up(state.rho) || blown_up(state.u)) {
      out.status = "blowup";
      out.reason = "solution max norm exceeded 1e8";
      return out;
    }
    out.steps_taken = i;
    out.final_time = state.time;
    if (i % static_cast<std::size_t>(cfg.report_every) == 0 || i == nsteps) {
      out.reports.push_back(base_report_reg(state, p));
      if (observer) observer(i, state);
    }
  }
  return out;
}

RunResult run_aug(AugmentedState& aug, const Params& p, const SolverConfig& cfg,
                  const RefTracking* tracking, const AugObserver& observer) {
  p.validate_augmented();
  cfg.validate();
  const std::size_t nsteps = step_count(cfg);
  if (cfg.scheme != Scheme::rk4)
    throw ConfigError("the augmented system only supports the rk4 scheme");
  if (cfg.dt * rk4_frequency_aug(aug.grid(), p, cfg) > kRk4Budget)
    throw ConfigError("dt exceeds the rk4 stability budget for these parameters");
  if (tracking && (!tracking->refs || tracking->refs->size() < nsteps + 1))
    throw ConfigError("reference trajectory shorter than the run");

  TrapezoidAccumulator drag_acc, grad_acc;
  double b_value = 0.0, b_prev = 0.0;

  auto make_report = [&](const AugmentedState& a, std::size_t step) {
    EntropyReport r;
    r.time = a.time;
    r.mass = a.mass();
    auto ae = functionals::aug_energy(a, p);
    r.aug_energy = ae.value;
    r.aug_dissipation = ae.dissipation;
    FluidState fs = deaugment(a, p);
    auto e = functionals::energy_nslk(fs, p);
    r.energy_nslk = e.value;
    r.dissipation_nslk = e.dissipation;
    try {
      r.bohm_ratio = functionals::bohm_inequality_ratio(a.rho, p);
    } catch (const DegenerateError&) {
    }
    if (tracking) {
      const StrongReference& ref = (*tracking->refs)[step];
      RelEntropy re;
      if (tracking->elk_mode)
        re = functionals::rel_entropy_elk(fs, a.vbar, ref, p, drag_acc.value);
      else
        re = functionals::rel_entropy_nslk(a, ref, p, grad_acc.value, drag_acc.value);
      r.rel_entropy_instant = re.instant;
      r.rel_entropy_total = re.total;
      r.b_accumulator = b_value;
      r.ck_gap = functionals::csiszar_kullback_gap(a.rho, ref.R, p);
    }
    return r;
  };

  auto track_step = [&](const AugmentedState& a, std::size_t step, double dt) {
    if (!tracking) return;
    const StrongReference& ref = (*tracking->refs)[step];
    FluidState fs = deaugment(a, p);
    if (tracking->elk_mode) {
      drag_acc.add(functionals::drag_mismatch_elk(fs, ref), dt);
      double bi = functionals::b_integrand(a.rho, fs.u, ref, p);
      if (step > 0) b_value = functionals::b_accumulate(b_value, b_prev, bi, dt);
      b_prev = bi;
    } else {
      drag_acc.add(functionals::drag_mismatch_nslk(a, ref), dt);
      grad_acc.add(functionals::grad_mismatch_nslk(a, ref), dt);
      double bi = functionals::b_integrand(a.rho, a.w, ref, p);
      if (step > 0) b_value = functionals::b_accumulate(b_value, b_prev, bi, dt);
      b_prev = bi;
    }
  };

  RunResult out;
  track_step(aug, 0, 0.0);
  out.reports.push_back(make_report(aug, 0));
  if (observer) observer(0, aug);

  for (std::size_t i = 1; i <= nsteps; ++i) {
    try {
      aug = rk4_aug(aug, p, cfg);
    } catch (const VacuumError& e) {
      out.status = "vacuum";
      out.reason = e.what();
      return out;
    }
    if (blown_up(aug.rho) || blown_up(aug.w) || blown_up(aug.vbar)) {
      out.status = "blowup";
      out.reason = "solution max norm exceeded 1e8";
      return out;
    }
    out.steps_taken = i;
    out.final_time = aug.time;
    track_step(aug, i, cfg.dt);
    if (i % static_cast<std::size_t>(cfg.report_every) == 0 || i == nsteps) {
      out.reports.push_back(make_report(aug, i));
      if (observer) observer(i, aug);
    }
  }
  return out;
}

}  // namespace qflk::solver
