#include "longwave/filter.hpp"

#include <cmath>

namespace longwave {

namespace {
// exp(-1/s) extended by 0 for s <= 0: the standard smooth glue.
double phi(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }
}  // namespace

double smooth_cutoff(double r, double inner, double outer) {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  double s = (r - inner) / (outer - inner);
  double a = phi(1.0 - s);
  double b = phi(s);
  return a / (a + b);
}

void FilterSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw BadConfig("filter alpha must be in (0,1)");
  if (!(psi1_inner > 0.0)) throw BadConfig("psi1 inner radius must be positive");
  if (!(psi1_inner < psi1_outer && psi1_outer < psi2_inner && psi2_inner < psi2_outer))
    throw BadConfig("filter radii must satisfy psi1_in < psi1_out < psi2_in < psi2_out");
}

}  // namespace longwave
