#pragma once

#include <array>
#include <string>
#include <vector>

namespace longwave {

/** Mixed derivative multi-index  d_t^{time} d_{x1}^{space[0]} d_{x2}^{space[1]}.
 *
 *  Used both to label corrector fields (the coefficient of the macroscopic
 *  derivative they multiply) and to label monomials of effective operators.
 *  dim is 1 or 2; for dim == 1, space[1] is always 0. */
struct MultiIndex {
  int dim = 1;
  int time = 0;
  std::array<int, 2> space{0, 0};

  MultiIndex() = default;
  MultiIndex(int dim_, int time_, int s1, int s2 = 0)
      : dim(dim_), time(time_), space{s1, s2} {}

  /** Total order |beta| = time + space[0] + space[1]. */
  int order() const { return time + space[0] + space[1]; }
  int space_order() const { return space[0] + space[1]; }

  MultiIndex plus_time(int n) const {
    MultiIndex r = *this;
    r.time += n;
    return r;
  }
  MultiIndex plus_space(int axis, int n) const {
    MultiIndex r = *this;
    r.space[axis] += n;
    return r;
  }

  /** Compact text form, e.g. "t^2.x1^1" (identity index prints as "1"). */
  std::string str() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.dim == b.dim && a.time == b.time && a.space == b.space;
  }
  /** Canonical ordering: by total order, then time order, then space lexicographic. */
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    if (a.time != b.time) return a.time < b.time;
    return a.space < b.space;
  }
};

/** All indices of the given total order in canonical order. */
std::vector<MultiIndex> indices_of_order(int dim, int k);

}  // namespace longwave
