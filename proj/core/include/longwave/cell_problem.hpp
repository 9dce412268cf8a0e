#pragma once

#include "longwave/coefficients.hpp"

namespace longwave {

/** Constituent operators of the two-scale expansion of rho d_t^2 - div(a grad)
 *  after substituting u(t, x, x/eps): purely fast part, the mixed part
 *  multiplying one macroscopic derivative, the coefficient of two macroscopic
 *  derivatives, and plain density multiplication. */

/** div_y (a grad_y f). */
PeriodicField apply_div_a_grad(const CellCoefficients& c, const PeriodicField& f);

/** Component i of the mixed operator:
 *  sum_j d_{y_j}(a_{ji} f)  +  sum_j a_{ij} d_{y_j} f. */
PeriodicField apply_mixed_column(const CellCoefficients& c, int i, const PeriodicField& f);

/** a_{ij} f (the coefficient attached to the macroscopic pair d_{x_i} d_{x_j}). */
PeriodicField apply_entry_mult(const CellCoefficients& c, int i, int j, const PeriodicField& f);

/** rho f. */
PeriodicField apply_rho_mult(const CellCoefficients& c, const PeriodicField& f);

struct CellSolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

/** Solve div_y(a grad_y u) = rhs on the torus for the mean-zero solution u.
 *
 *  Preconditioned conjugate gradient in coefficient space with the constant
 *  mean-tensor Laplacian as preconditioner. The right-hand side must have
 *  zero mean (NonZeroMeanRHS otherwise); NoConvergence after max_iter. */
PeriodicField solve_cell(const CellCoefficients& c, const PeriodicField& rhs,
                         double tol = 1e-12, int max_iter = 5000,
                         CellSolveStats* stats = nullptr);

}  // namespace longwave
