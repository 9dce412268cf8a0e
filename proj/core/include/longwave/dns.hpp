#pragma once

#include <cstdint>
#include <vector>

#include "longwave/coefficients.hpp"
#include "longwave/sampler.hpp"
#include "longwave/source.hpp"

namespace longwave {

/** State of the microscale reference solution at one (snapped) output time. */
struct DnsSnapshot {
  double t = 0.0;           // actual recorded time (a multiple of dt)
  std::vector<double> u;    // node values
  std::vector<double> ut;   // centered average of the staggered velocity
};

struct DnsResult {
  double eps = 0.0;
  double box_length = 0.0;
  int n = 0;         // nodes; n = periods * points-per-period
  int ppp = 0;       // points per cell period
  double dx = 0.0;
  double dt = 0.0;
  std::int64_t steps = 0;
  std::vector<DnsSnapshot> snapshots;
  // Discrete energy monitor (staggered kinetic + face elastic), sampled
  // sparsely after the source switches off.
  std::vector<double> energy_t;
  std::vector<double> energy_e;
  double u_max = 0.0;        // max |u| seen anywhere
  double edge_max = 0.0;     // max |u| seen in the boundary annulus
};

/** Explicit staggered leapfrog for rho(x/eps) u_tt = d_x(a(x/eps) d_x u) + f
 *  on a periodic box, from rest.  The cell must tile the box (L/eps integer)
 *  and nodes sample exact cell phases (i mod ppp alignment).  Face
 *  coefficients are exact interval harmonic averages of a; node densities are
 *  exact interval averages of rho.  dt is set from the CFL bound
 *  (cfl * dx * sqrt(rho_min/a_max)), snapped so the pulse end t = 1 is hit
 *  exactly; a dt_override above the bound throws CFLViolation.
 *
 *  time_order selects the update: 2 is the plain staggered leapfrog (exactly
 *  conserved shadow energy); 4 adds the modified-equation dt^4/12 correction
 *  (two flux applications per step, 1.5x larger stable dt), used when the
 *  measured asymptotic errors sit below the second-order phase-error floor. */
DnsResult solve_exact(const CellCoefficients& cell, double eps, const SourceTerm& f,
                      double box_length, int ppp, const std::vector<double>& out_times,
                      double cfl = 0.9, double dt_override = 0.0, int time_order = 2);

/** Spectral d/dx of box-periodic samples (Nyquist zeroed). */
std::vector<double> spectral_dx(const std::vector<double>& u, double box_length);

struct SnapshotError {
  double t = 0.0;
  double energy_error = 0.0;  // || grad_{t,x}(u - model) ||_L2(box)
  double l2_error = 0.0;      // || u - model ||_L2(box)
  double ref_energy = 0.0;    // same norms of the reference alone
  double ref_l2 = 0.0;
};

/** Evaluate the model on the DNS lattice at the snapshot time and measure
 *  unweighted space-time gradient and value errors. */
SnapshotError compare_snapshot(const DnsResult& dns, std::size_t snap,
                               const TwoScaleSampler& model);

}  // namespace longwave
