#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave {

using cplx = std::complex<double>;

/** Integer frequency stored in FFT slot i of an n-point grid
 *  (0, 1, ..., n/2, -(n/2-1), ..., -1 for even n). */
int fft_freq(int slot, int n);
/** FFT slot holding integer frequency f (f reduced mod n). */
int fft_slot(int f, int n);

/** Unnormalized FFT helpers on row-major complex data (dim 1 or 2, n per axis).
 *  forward uses sign -1 (samples -> n^dim * coefficients),
 *  inverse uses sign +1 (true coefficients -> samples). Thread-safe. */
void fft_forward(int dim, int n, cplx* data);
void fft_inverse(int dim, int n, cplx* data);

/** Real scalar field on the unit torus (dim 1 or 2), stored as the complex
 *  Fourier coefficients of the band |f_axis| <= n/2 in FFT slot order:
 *
 *      f(y) = sum_f  c_f  exp(2 pi i f . y).
 *
 *  Fields are immutable in spirit: all operations return new fields or are
 *  used only during construction. Coefficients are kept Hermitian-symmetric
 *  so that sample values are real. */
class PeriodicField {
 public:
  PeriodicField() = default;
  PeriodicField(int dim, int n);

  static PeriodicField constant(int dim, int n, double value);
  /** Collocation samples on the n-per-axis lattice y_i = i/n (row-major). */
  static PeriodicField from_samples(int dim, int n, const std::vector<double>& values);
  /** Sample a callable on the collocation lattice. For dim 1 the second
   *  argument is passed as 0. */
  static PeriodicField from_function(int dim, int n,
                                     const std::function<double(double, double)>& f);
  /** Random real field with coefficients supported on 0 < |f|_inf <= max_mode,
   *  magnitude ~ amplitude / (1+|f|)^decay. Deterministic in seed. */
  static PeriodicField random_band_limited(int dim, int n, int max_mode,
                                           double amplitude, unsigned seed,
                                           double decay = 2.0);

  int dim() const { return dim_; }
  int n() const { return n_; }
  bool empty() const { return c_.empty(); }
  std::size_t mode_count() const { return c_.size(); }

  /** Coefficient of integer frequency (f1, f2). */
  cplx coeff(int f1, int f2 = 0) const;
  void set_coeff(int f1, int f2, cplx v);

  double mean() const;
  void subtract_mean();

  /** Spectral derivative along axis (0 or 1). The Nyquist mode is zeroed to
   *  keep the result Hermitian. */
  PeriodicField derivative(int axis) const;

  /** L2(torus) norm via Parseval (unit measure). */
  double norm_l2() const;
  /** Max of |values| on the collocation grid. */
  double max_abs() const;
  /** Min of values on an oversampled collocation grid. */
  double min_on_grid(int oversample = 4) const;

  /** Values on an m-per-axis lattice (m = 0 means m = n; m > n zero-pads,
   *  i.e. evaluates the trigonometric polynomial exactly on the finer grid). */
  std::vector<double> samples(int m = 0) const;

  /** Exact evaluation of the trigonometric polynomial at one point. */
  double eval(double y1, double y2 = 0.0) const;

  /** Enforce Hermitian symmetry (project onto real fields). */
  void enforce_real();

  /** Same field re-expressed with n_new modes per axis (grow: zero-pad,
   *  shrink: truncate the band). */
  PeriodicField truncated(int n_new) const;

  PeriodicField& operator+=(const PeriodicField& o);
  PeriodicField& operator-=(const PeriodicField& o);
  PeriodicField& operator*=(double s);
  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }

  const std::vector<cplx>& data() const { return c_; }
  std::vector<cplx>& data() { return c_; }

 private:
  int dim_ = 0;
  int n_ = 0;
  std::vector<cplx> c_;  // size n^dim, FFT slot order, row-major for dim 2
};

/** Pointwise product computed on a 3n/2 dealiasing grid and truncated back to
 *  the common band: the retained coefficients are exact (no aliasing). */
PeriodicField multiply(const PeriodicField& a, const PeriodicField& b);

/** Real L2(torus) inner product. */
double inner(const PeriodicField& a, const PeriodicField& b);

/** Pointwise reciprocal 1/f, sampled on an (oversample*n)-point grid and kept
 *  at that band. Throws BadInput unless f is strictly positive on the grid. */
PeriodicField reciprocal(const PeriodicField& f, int oversample = 4);

/** Exact integral of a 1D field over [alpha, beta] in unit-period coordinates
 *  (the trigonometric polynomial is integrated term by term). */
double integral_1d(const PeriodicField& f, double alpha, double beta);

}  // namespace longwave
