#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "longwave/cell_problem.hpp"
#include "longwave/multi_index.hpp"

namespace longwave {

/** One order of the corrector cascade: multi-index beta (|beta| = k) mapped to
 *  its mean-zero periodic coefficient field. */
using CorrectorLayer = std::map<MultiIndex, PeriodicField>;

/** Table of cell corrector operators: order k acts on a smooth profile v as
 *  sum_beta c_{beta,k}(y) d^beta v. Order 0 is the implicit identity and is
 *  not stored. */
struct CorrectorTable {
  int dim = 1;
  int n = 0;
  int max_order = 0;
  std::vector<CorrectorLayer> layers;  // layers[k-1] holds order k

  const CorrectorLayer& layer(int k) const;
  /** Field for (k, beta), or nullptr when that entry is absent (zero). */
  const PeriodicField* find(int k, const MultiIndex& beta) const;
};

/** Build correctors through max_order by the triangular recursion: the order-k
 *  right-hand sides are assembled from orders k-1 (one extra space derivative
 *  via the mixed operator) and k-2 (two extra space derivatives via the
 *  coefficient entries, or two extra time derivatives via -rho), then one
 *  mean-free cell solve per multi-index, negated. */
CorrectorTable compute_correctors(const CellCoefficients& c, int max_order,
                                  double tol = 1e-12);

/** Independent reconstruction of order k as the sum over all words in the
 *  one-shift/two-shift letters (compositions of k into parts 1 and 2), each
 *  word applied letter by letter to the identity with its own cell solves.
 *  Exponential cost; guarded to k <= 6 (OrderTooLarge beyond). */
CorrectorLayer word_sum_layer(const CellCoefficients& c, int k, double tol = 1e-12);

/** Largest relative deviation between two layers (scale = max entry norm). */
double layer_distance(const CorrectorLayer& a, const CorrectorLayer& b);

/** Text dump, one record per (k, beta) with full Fourier coefficients;
 *  deterministic order for golden comparisons. */
void dump_correctors(const CorrectorTable& t, std::ostream& out);

}  // namespace longwave
