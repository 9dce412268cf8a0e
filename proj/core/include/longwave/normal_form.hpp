#pragma once

#include <vector>

#include "longwave/homog_ops.hpp"

namespace longwave {

/** Result of eliminating time derivatives from the effective-operator series:
 *  reduction operators R_{2j} (degree 2j, j = 1..k) and space-only corrected
 *  operators a_tilde_{2j} (degree 2j, j = 2..k+1), together with the
 *  nondegenerate degree-2 data (rho_bar, spatial part a2). */
struct NormalForm {
  int dim = 1;
  int k = 0;
  double rho_bar = 0.0;
  HomogenizedPoly a2;                    // spatial part of the degree-2 operator
  std::vector<HomogenizedPoly> R;        // R[j-1] has degree 2j, j = 1..k
  std::vector<HomogenizedPoly> a_tilde;  // a_tilde[j-2] has degree 2j, j = 2..k+1
  double elimination_dust = 0.0;  // max relative time-monomial residue cancelled

  const HomogenizedPoly& R_of_degree(int deg) const;
  const HomogenizedPoly& a_tilde_of_degree(int deg) const;
};

/** Time-derivative elimination. The series must contain even degrees
 *  2, 4, ..., 2k+2; degree 2 must have positive mass rho_bar (coefficient of
 *  d_t^2), else DegenerateA2. Inner recursion per degree D = 2j+2:
 *  accumulate p = a*_D + sum R_{2i} a*_{D-2i}, peel its time structure with
 *  q_0 = -s_0 / rho_bar, q_{2i} = -(s_{2i} + q_{2i-2} a2) / rho_bar, assemble
 *  R_{2j}, and set a_tilde_D = p + R_{2j} a*_2 (time parts cancel by
 *  construction; the cancellation residue is recorded, verified, dropped). */
NormalForm eliminate_time_derivatives(const OperatorSeries& series);

/** Multiplicative inverse of (1 + sum R) as a truncated geometric series;
 *  returns R_tilde of degrees 2..2k. */
std::vector<HomogenizedPoly> invert_R_series(const NormalForm& nf);

struct ReductionReport {
  double max_residual_rel = 0.0;  // worst relative mismatch over degrees <= 2k+2
  double inverse_residual_rel = 0.0;  // (1+R_tilde)(1+R) - 1 mass over degrees <= 2k
};

/** Re-expand (1 + sum R_tilde)(a*_2 + sum a_tilde) and compare against the
 *  original series through degree 2k+2. */
ReductionReport verify_inverse_reduction(const NormalForm& nf, const OperatorSeries& series,
                                         const std::vector<HomogenizedPoly>& R_tilde);

}  // namespace longwave
