#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave {

using cplx = std::complex<double>;

/** State of one Fourier mode of rho v_tt + mu v = S. */
struct OscState {
  cplx v{0.0, 0.0};
  cplx vt{0.0, 0.0};
};

/** sin(z)/z with a series branch for small z. */
double sinc(double z);

/** Exact propagator of the homogeneous oscillator rho v'' + mu v = 0 over a
 *  step h (mu >= 0; mu = 0 degenerates to free motion). */
OscState rotate(double rho, double mu, const OscState& s, double h);

/** One exponential-integrator step over [t, t+h] for rho v'' + mu v = S:
 *  exact homogeneous rotation plus 2-point Gauss quadrature of the Duhamel
 *  integral. Unconditionally stable; 4th-order in h on smooth forcing. */
OscState exp_step(double rho, double mu, const OscState& s, double t, double h,
                  const std::function<cplx(double)>& S);

/** Sum of terms poly(t - t0) * exp(lambda (t - t0)): the closed-form shape of
 *  every post-source mode in this project. Exact evaluation and
 *  differentiation at any time, so long horizons cost O(1). */
struct PolyExpTerm {
  cplx lambda{0.0, 0.0};
  std::vector<cplx> coeff;  // ascending powers of (t - t0)

  cplx eval_shifted(double tau) const;  // value at t = t0 + tau
  PolyExpTerm derivative() const;
};

class PolyExp {
 public:
  double t0 = 0.0;
  std::vector<PolyExpTerm> terms;

  cplx eval(double t) const;
  PolyExp derivative() const;
  /** Add a term, merging with an existing term of (bitwise) equal lambda. */
  void add(cplx lambda, std::vector<cplx> coeff);
  PolyExp& operator*=(cplx s);
  PolyExp& operator+=(const PolyExp& o);  // t0 must match
  int max_degree() const;
};

/** Resonance classification for the particular solution of
 *  rho w'' + mu w = poly(t-t0) e^{lambda (t-t0)}. */
enum class ForcingMode { NonResonant, Resonant, DoubleRoot };

ForcingMode classify_forcing(double rho, double mu, cplx lambda);

/** Particular solution with the matching shape: same lambda, polynomial of
 *  degree n (NonResonant), n+1 (Resonant, zero constant term), or n+2
 *  (DoubleRoot, zero constant and linear terms). Coefficients by exact
 *  back-substitution. */
PolyExpTerm particular_solution(double rho, double mu, const PolyExpTerm& forcing);

/** Homogeneous solution of rho v'' + mu v = 0 with state (v, vt) at t = t0:
 *  two exponentials exp(+-i omega (t-t0)) (or a linear polynomial at mu=0). */
PolyExp homogeneous_from_state(double rho, double mu, const OscState& s, double t0);

}  // namespace longwave
