#pragma once

#include <memory>
#include <vector>

#include "longwave/mode_ode.hpp"
#include "longwave/multi_index.hpp"

namespace longwave {

/** Fourier grid of a periodic box of side `length` centred at 0: slot j holds
 *  frequency xi = 2 pi fft_freq(j, n) / length. */
struct BoxGrid {
  double length = 0.0;
  int n = 0;

  double xi(int slot) const;
  void validate() const;
};

/** Per-mode forcing in Fourier space: \hat S(t, xi_slot) and its analytic time
 *  derivatives; vanishes for t >= end_time(). */
class ModeSource {
 public:
  virtual ~ModeSource() = default;
  virtual cplx eval(int slot, double t, int deriv) const = 0;
  virtual double end_time() const { return 1.0; }
};

/** (i xi)^p. */
cplx i_xi_pow(double xi, int p);

/** Real lattice values of sum_s coeff[s] e^{i xi_s x} on the N-point lattice
 *  x_i = -L/2 + i L/N + offset (zero-padded inverse FFT; N >= grid.n). */
std::vector<double> synthesize_slots(const BoxGrid& grid, const std::vector<cplx>& coeff,
                                     int N, double offset = 0.0);

/** Raw ingredients of a spectral solution, filled by the solvers. */
struct SpectralSolutionData {
  BoxGrid grid;
  double rho_bar = 1.0;
  std::vector<double> mu;    // per slot, symbol of the spatial operator
  double t_off = 1.0;        // forcing support end; phase boundary
  double dt = 1e-3;          // phase-1 marching step (t_off/dt integral)
  int checkpoint_stride = 8;
  std::vector<char> active;  // inactive modes are identically zero
  /** Per slot: states at steps 0, stride, 2 stride, ..., n_steps (inclusive);
   *  empty for inactive slots. */
  std::vector<std::vector<OscState>> checkpoints;
  /** Per slot: closed-form evolution valid for t >= t_off. */
  std::vector<PolyExp> post;
  std::shared_ptr<const ModeSource> source;  // may be null once t >= t_off only is used
  int max_deriv = 8;         // declared mixed-derivative support
};

/** Immutable per-mode solution of rho_bar v'' + mu(xi) v = \hat S(t, xi) on a
 *  periodic box: exact closed-form evaluation (any time derivative) after the
 *  source switches off, deterministic re-marching from checkpoints inside the
 *  source window. */
class SpectralSolution {
 public:
  SpectralSolution() = default;
  explicit SpectralSolution(SpectralSolutionData d);

  const BoxGrid& grid() const { return d_.grid; }
  double rho_bar() const { return d_.rho_bar; }
  double mu(int slot) const { return d_.mu[static_cast<std::size_t>(slot)]; }
  double t_off() const { return d_.t_off; }
  double step_dt() const { return d_.dt; }
  int max_deriv() const { return d_.max_deriv; }
  bool active(int slot) const { return d_.active[static_cast<std::size_t>(slot)] != 0; }
  const ModeSource* source() const { return d_.source.get(); }
  const PolyExp& post(int slot) const { return d_.post[static_cast<std::size_t>(slot)]; }

  /** \hat v (time_deriv = 0) or its time derivatives at any t (0 for t <= 0).
   *  Derivatives above 1 inside the source window use the ODE recursion
   *  rho_bar v'' = S - mu v, hence need the source's analytic derivatives. */
  cplx mode_value(int slot, double t, int time_deriv = 0) const;
  OscState mode_state(int slot, double t) const;

  /** rho_bar |v_t|^2 + mu |v|^2 of one mode. */
  double mode_energy(int slot, double t) const;

  /** Values of d^beta v (beta.time time derivatives, beta.space[0] spatial)
   *  on the N-point uniform lattice x_i = -L/2 + i L/N + offset. N >= mode
   *  count. Throws InsufficientDerivatives beyond max_deriv. */
  std::vector<double> synthesize(const MultiIndex& beta, double t, int N,
                                 double offset = 0.0) const;

  /** L2(box) norm of d^beta v at time t via Parseval. */
  double norm_l2(const MultiIndex& beta, double t) const;

 private:
  cplx post_value(int slot, double t, int deriv) const;

  SpectralSolutionData d_;
  std::vector<std::vector<PolyExp>> post_derivs_;  // [slot][order <= max_deriv]
};

}  // namespace longwave
