#pragma once

#include "longwave/errors.hpp"

namespace longwave {

/** C-infinity monotone bridge: 1 for r <= inner, 0 for r >= outer, smooth
 *  partition-of-unity ratio in between. */
double smooth_cutoff(double r, double inner, double outer);

/** Low-pass filter pair for the dispersive solver, in rescaled frequency
 *  units: psi1 gates the forcing, psi2 gates the dispersive correction of the
 *  symbol; psi2 must equal 1 on a neighborhood of supp psi1. Frequencies are
 *  tested against eps^alpha |xi|. */
struct FilterSpec {
  double alpha = 0.5;
  double psi1_inner = 1.0;
  double psi1_outer = 2.0;
  double psi2_inner = 2.5;
  double psi2_outer = 3.5;

  void validate() const;
  double psi1(double r) const { return smooth_cutoff(r, psi1_inner, psi1_outer); }
  double psi2(double r) const { return smooth_cutoff(r, psi2_inner, psi2_outer); }
};

}  // namespace longwave
