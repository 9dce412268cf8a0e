#pragma once

#include <memory>
#include <vector>

#include "longwave/correctors.hpp"
#include "longwave/spectral_solution.hpp"

namespace longwave {

/** One additive contribution to a two-scale reconstruction: a smooth profile
 *  u with the corrector series applied through `corrector_orders`,
 *
 *    prefactor * sum_{k=0}^{orders} eps^k sum_{|beta|=k} c_beta(x/eps) d^beta u(t,x)
 *
 *  (order 0 is the identity: the profile itself). */
struct SamplerPiece {
  std::shared_ptr<const SpectralSolution> profile;
  double prefactor = 1.0;
  int corrector_orders = 0;
};

/** Point and lattice evaluation of a sum of corrector-dressed profiles,
 *  together with its exact time derivative and (chain-rule) space derivative:
 *  the fast-scale factor contributes eps^{-1} c_beta'(x/eps) terms.  All
 *  pieces must share one box grid. */
class TwoScaleSampler {
 public:
  enum class Deriv { Value, Dt, Dx };

  TwoScaleSampler(const CorrectorTable& table, double eps, std::vector<SamplerPiece> pieces);

  /** Values on the N-point lattice x_i = -L/2 + i L/N.  Fast path: cell
   *  phases x_i / eps recur with a short period (detected automatically),
   *  profile derivative arrays come from zero-padded FFT synthesis. */
  std::vector<double> lattice(Deriv d, double t, int N) const;

  /** Pointwise slow path (direct Fourier sums); cross-checks the lattice. */
  double value(double t, double x) const { return point(Deriv::Value, t, x); }
  double dt(double t, double x) const { return point(Deriv::Dt, t, x); }
  double dx(double t, double x) const { return point(Deriv::Dx, t, x); }

  double eps() const { return eps_; }
  const BoxGrid& grid() const { return grid_; }
  const std::vector<SamplerPiece>& pieces() const { return pieces_; }

 private:
  double point(Deriv d, double t, double x) const;

  struct Entry {
    MultiIndex beta;
    bool identity = true;   // order-0 term: coefficient 1, no fast scale
    PeriodicField field;    // owned copy of the corrector coefficient
    PeriodicField deriv;    // d/dy of the coefficient
    double weight = 0.0;    // prefactor * eps^{|beta|}
  };

  double eps_ = 0.0;
  BoxGrid grid_;
  std::vector<SamplerPiece> pieces_;
  std::vector<std::vector<Entry>> entries_;  // per piece
};

/** The canonical dressing: one profile, unit prefactor, series through
 *  `order`. */
TwoScaleSampler apply_corrector_series(const CorrectorTable& table, int order,
                                       std::shared_ptr<const SpectralSolution> profile,
                                       double eps);

}  // namespace longwave
