#pragma once

#include <complex>
#include <string>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave {

using cplx = std::complex<double>;

/** Time pulse supported in [0, 1] with closed-form derivatives of any order.
 *
 *  Polynomial kind: 4^m [t(1-t)]^m, normalized to peak 1; globally C^{m-1}
 *  (higher derivatives jump at the endpoints). Gaussian-bump kind: a narrow
 *  Gaussian centered in the interval, C-infinity up to tails ~exp(-24) at the
 *  endpoints; used for finite-difference oracles. */
struct TimePulse {
  enum class Kind { Polynomial, GaussianBump };
  Kind kind = Kind::Polynomial;
  int m = 4;               // polynomial smoothness exponent
  double sigma = 1.0 / 14.0;  // gaussian width
  double center = 0.5;

  /** d^order/dt^order of the pulse at t (0 outside the support). */
  double derivative(int order, double t) const;
  double value(double t) const { return derivative(0, t); }
  /** Number of derivatives continuous across the support boundary. */
  int smooth_orders() const;
  std::string str() const;
};

/** Spatial Gaussian profile amplitude * exp(-(x-center)^2 / (2 width^2)),
 *  or its (zero-mean) first derivative when moment == 1.  The derivative
 *  variant injects no net impulse, which keeps the periodized zero mode at
 *  rest; plain pulses drift it linearly because a box cannot radiate the
 *  accumulated momentum away. */
struct SpatialGaussian {
  double width = 1.0;
  double center = 0.0;
  double amplitude = 1.0;
  int moment = 0;  // 0: Gaussian, 1: dipole (x-derivative of a Gaussian)

  double value(double x) const;
  /** Whole-line Fourier transform at frequency xi (e^{-i xi x} convention). */
  cplx fourier(double xi) const;
  /** Half-width of the numerically relevant support (|f| > 1e-300 cutoff). */
  double support_radius() const;
  std::string str() const;
};

/** Separable space-time forcing f(t, x) = pulse(t) * profile(x), supported in
 *  0 <= t <= 1. */
struct SourceTerm {
  TimePulse pulse;
  SpatialGaussian profile;

  double value(double t, double x) const { return pulse.value(t) * profile.value(x); }
  std::string str() const;
};

/** Parse "poly_pulse:m,width[,amplitude[,center]]",
 *  "gauss_pulse:sigma,width[,amplitude[,center]]" or
 *  "dipole_pulse:sigma,width[,amplitude[,center]]" source descriptors. */
SourceTerm make_source(const std::string& descriptor);

}  // namespace longwave
