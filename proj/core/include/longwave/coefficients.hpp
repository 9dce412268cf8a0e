#pragma once

#include <array>
#include <string>

#include "longwave/torus_field.hpp"

namespace longwave {

/** Periodic material data: density rho and symmetric coefficient matrix a,
 *  band-limited to n modes per axis.
 *
 *  Media are ingested once (analytic Fourier coefficients or samples) and
 *  truncated spectrally to the band; the band-limited medium is the ground
 *  truth for every solver in this project, including the reference scheme.
 *  The measured ellipticity floor of the band-limited medium is recorded in
 *  floor_grid (sharp media lose some margin to truncation ripples). */
struct CellCoefficients {
  int dim = 1;
  int n = 0;
  PeriodicField rho;
  std::array<std::array<PeriodicField, 2>, 2> a;  // a[i][j]; dim 1 uses a[0][0] only
  double floor_grid = 0.0;  // min over an oversampled grid of rho and of eig_min(a)
  std::string description;

  const PeriodicField& a_entry(int i, int j) const;
  double rho_mean() const { return rho.mean(); }
  bool is_constant(double tol = 1e-13) const;

  /** Measure floor_grid and reject non-positive media. */
  void validate();
};

CellCoefficients make_constant(int dim, int n, double a0, double rho0);

/** 1D piecewise-constant bar: a = a_minus on [0, theta), a_plus on [theta, 1),
 *  rho = 1, ingested via its exact Fourier coefficients truncated to the band. */
/** High-contrast two-phase stiffness with smoothed interfaces, rho = 1.
 *  The profile is built in 1/a: a square wave between 1/a_minus and 1/a_plus
 *  (fraction theta at a_minus) mollified by a periodic Gaussian of width
 *  `sharpness`. Mollification preserves the mean of 1/a exactly, so the
 *  homogenized coefficient equals the sharp-interface harmonic mean. */
CellCoefficients make_two_phase(int n, double a_minus, double a_plus, double theta,
                                double sharpness = 0.03);

/** Smooth scalar medium: dim 1: a = 1 + amplitude sin(2 pi y); dim 2:
 *  a = (1 + amplitude sin(2 pi y1) sin(2 pi y2)) I. rho = 1. */
CellCoefficients make_smooth_sine(int dim, int n, double amplitude);

/** Random smooth positive medium (log-normal entries, small off-diagonal
 *  coupling for dim 2), deterministic in seed. */
CellCoefficients make_random_smooth(int dim, int n, unsigned seed);

/** Parse a medium descriptor:
 *    "constant:a0,rho0" | "two_phase:a-,a+,theta" | "smooth_sine:amp" | "random:seed" */
CellCoefficients make_medium(const std::string& descriptor, int dim, int n);

void save_coefficients(const CellCoefficients& c, const std::string& path);
CellCoefficients load_coefficients(const std::string& path);

}  // namespace longwave
