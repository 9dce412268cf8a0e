#include "longwave/multi_index.hpp"

namespace longwave {

std::string MultiIndex::str() const {
  if (order() == 0) return "1";
  std::string s;
  auto append = [&s](const char* sym, int p) {
    if (p == 0) return;
    if (!s.empty()) s += '.';
    s += sym;
    if (p > 1) {
      s += '^';
      s += std::to_string(p);
    }
  };
  append("t", time);
  append("x1", space[0]);
  append("x2", space[1]);
  return s;
}

std::vector<MultiIndex> indices_of_order(int dim, int k) {
  std::vector<MultiIndex> out;
  for (int t = 0; t <= k; ++t) {
    if (dim == 1) {
      out.emplace_back(dim, t, k - t);
    } else {
      for (int s1 = 0; s1 <= k - t; ++s1) out.emplace_back(dim, t, s1, k - t - s1);
    }
  }
  return out;
}

}  // namespace longwave
