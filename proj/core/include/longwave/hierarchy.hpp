#pragma once

#include <vector>

#include "longwave/homog_ops.hpp"
#include "longwave/source.hpp"
#include "longwave/spectral_solution.hpp"

namespace longwave {

/** The cascade of mean-field profiles: level 0 solves the leading effective
 *  wave equation rho_bar u'' + a2(D) u = f from rest, and level j >= 1 solves
 *  the same equation driven by the higher effective operators applied to the
 *  lower levels,
 *
 *    rho_bar d_t^2 u_{2j} + a2(D) u_{2j} = - sum_{m=2}^{j+1} a*_{2m} u_{2(j+1-m)} .
 *
 *  Every resonance in the cascade is captured exactly: after the pulse,
 *  level j is a trigonometric polynomial in t of degree j per mode, which is
 *  the secular growth mechanism. */
struct ClassicalExpansion {
  int k = 0;
  double rho_bar = 1.0;
  std::vector<SpectralSolution> levels;  // levels[j] = profile 2j, j = 0..k

  const SpectralSolution& level(int j) const;
};

/** Solves the cascade through level k on a periodic box (all levels marched
 *  simultaneously mode-by-mode during the pulse, closed exponential forms
 *  afterwards).  `horizon` is the largest evaluation time, used for the
 *  propagation (wrap) check.  One-dimensional media only. */
ClassicalExpansion solve_hierarchy(const OperatorSeries& ops, int k, const SourceTerm& f,
                                   double box_length, int n_modes, double horizon,
                                   double dt);

/** Max over modes of the relative residual of the level-j equation at time t
 *  (post-pulse), a direct consistency check of the marching and closure. */
double hierarchy_defect(const ClassicalExpansion& exp, const OperatorSeries& ops, int j,
                        double t);

/** Least-squares slope of log ||d^beta u_{2k}(t)|| against log t over
 *  n_samples log-spaced times in [t1, t2]; requires t2 >= 4 t1 and t1 >= 2,
 *  else WindowTooShort.  Optional outputs: stderr of the slope and R^2. */
double measure_secular_growth(const ClassicalExpansion& exp, const MultiIndex& beta,
                              double t1, double t2, int n_samples = 12,
                              double* slope_stderr = nullptr, double* r2 = nullptr,
                              int level = -1);

/** Right/left-moving profile split of the leading-order solution at a time
 *  t_star past the pulse: for t >= t_star (ideally any t with f off),
 *  u_0(x, t) = g(x - c t) + h(x + c t) mode by mode (the xi = 0 drift is
 *  split evenly and does not contribute to derivatives). */
struct DAlembertSplit {
  BoxGrid grid;
  double c = 0.0;  // sqrt(a2_floor / rho_bar)
  std::vector<cplx> ghat, hhat;

  /** Lattice values of d^n g(x - c t) resp. d^n h(x + c t). */
  std::vector<double> g_deriv(int n, double t, int N) const;
  std::vector<double> h_deriv(int n, double t, int N) const;
};

DAlembertSplit split_dalembert(const SpectralSolution& u0, double rho_bar, double a2_floor,
                               double t_star);

/** Closed-form principal part of the first corrector level: the linearly
 *  growing ray-splitting term
 *
 *    z2(t,x) = gamma / (4 rho_bar c^2) [ (ct+x) g'''(x-ct) - (ct-x) h'''(x+ct) ],
 *
 *  gamma = a*_4 with d_t -> -c, d_x -> 1 (plain substitution; only even time
 *  orders occur, so both characteristics give the same gamma).  u_2 minus z2
 *  stays bounded in time while both sides grow linearly. */
std::vector<double> secular_principal(const DAlembertSplit& split, const OperatorSeries& ops,
                                      double rho_bar, double t, int N);

}  // namespace longwave
