#pragma once

#include <memory>
#include <vector>

#include "longwave/filter.hpp"
#include "longwave/normal_form.hpp"
#include "longwave/source.hpp"
#include "longwave/spectral_solution.hpp"

namespace longwave {

/** Frequency-truncated dispersion relation built from the normal form.
 *
 *  mu_eps(xi) = a2(xi) + psi2(eps^alpha |xi|) * sum_{j=2}^{k+1} eps^{2j-2} at_{2j}(xi)
 *
 *  where a2(xi) and at_{2j}(xi) are the spatial symbols of the leading
 *  operator and the time-eliminated corrections (evaluated with the
 *  Fourier convention d_x -> i xi, so even-order operators give real
 *  values).  The outer cutoff psi2 switches the corrections off at high
 *  frequency; this is what keeps the truncated model well posed even
 *  though the raw degree-4 correction has the wrong sign at large xi.
 *
 *  One-dimensional media only (the box solvers are 1D).
 */
class DispersionSymbol {
 public:
  DispersionSymbol(const NormalForm& nf, int k, double eps, FilterSpec filter);

  /** mu_eps(xi); >= (a2_floor/2) xi^2 for all xi whenever eps <= eps0(). */
  double operator()(double xi) const;

  /** Same sum without the psi2 cutoff.  Goes negative at large |xi| as
   *  soon as the first correction has a negative sign; used to exhibit
   *  the ill-posedness of the unfiltered truncation. */
  double unfiltered(double xi) const;

  /** Largest mesh parameter for which the filtered symbol stays above
   *  (a2_floor/2) xi^2 on the whole cutoff region. */
  double eps0() const { return eps0_; }
  double eps() const { return eps_; }
  int order() const { return k_; }
  double rho_bar() const { return rho_bar_; }
  /** Coefficient floor of the leading symbol: a2(xi) >= a2_floor * xi^2. */
  double a2_floor() const { return a2_floor_; }
  const FilterSpec& filter() const { return filter_; }

 private:
  double correction_sum(double xi) const;

  int k_ = 1;
  double eps_ = 0.0;
  double eps0_ = 0.0;
  double rho_bar_ = 0.0;
  double a2_floor_ = 0.0;
  FilterSpec filter_;
  HomogenizedPoly a2_;
  std::vector<HomogenizedPoly> a_tilde_;  // degrees 4, 6, ..., 2k+2
};

/** Validates eps against the symbol's positivity threshold and returns the
 *  symbol.  Throws EpsilonTooLarge (reporting eps0) if eps exceeds it. */
DispersionSymbol build_symbol(const NormalForm& nf, int k, double eps,
                              const FilterSpec& filter);

/** Right-hand side of the one-equation model: (1 + sum_j eps^{2j} R_{2j}) f,
 *  evaluated per spatial frequency.  Values are continuous Fourier
 *  transforms in x (the box solver divides by the box length). */
class RForcing {
 public:
  RForcing(const NormalForm& nf, int k, double eps, SourceTerm f);

  /** d-th time derivative of the transformed forcing at frequency xi. */
  cplx eval_xi(double xi, double t, int deriv) const;

  /** Largest pulse derivative order the evaluation may request. */
  int max_time_order() const;

  const SourceTerm& source() const { return f_; }

 private:
  double eps_ = 0.0;
  SourceTerm f_;
  // per extra-time-derivative-order d: polynomial weight in xi,
  // w_d(xi) = delta_{d,0} + sum_j eps^{2j} sum_{|beta_t| = d} c_beta (i xi)^{beta_x}
  // stored as coefficient lists over space order.
  std::vector<std::vector<double>> weight_;  // weight_[d][bx] (real; i-powers folded at eval)
};

/** Solves  rho_bar v_tt + mu_eps(D) v = psi1(eps^alpha D)(1 + R(eps D)) f
 *  on a periodic box of length `box_length` discretized with `n_modes`
 *  Fourier modes, from rest.  Modes where the inner cutoff psi1 vanishes
 *  are exactly zero.  While the pulse is on, modes are marched with a
 *  fourth-order exponential integrator at step <= dt; afterwards each mode
 *  is closed in exponential form.
 *
 *  `horizon` is the largest time the caller intends to evaluate at; the
 *  box is checked against it (support of f plus propagation at the top
 *  group speed must fit in half the box, else BoxTooSmall). */
SpectralSolution solve_filtered(const NormalForm& nf, int k, double eps,
                                const FilterSpec& filter, const SourceTerm& f,
                                double box_length, int n_modes, double horizon,
                                double dt);

}  // namespace longwave
