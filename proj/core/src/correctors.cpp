#include "longwave/correctors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

namespace longwave {

namespace {

// Accumulate into rhs[key] (+= sign * field), creating the entry on demand.
void add_to(CorrectorLayer& layer, const MultiIndex& key, PeriodicField f, double sign) {
  f *= sign;
  auto it = layer.find(key);
  if (it == layer.end())
    layer.emplace(key, std::move(f));
  else
    it->second += f;
}

// Right-hand sides of order k from the two source layers (nullptr = that
// order is the implicit identity layer; empty optional handled by caller).
CorrectorLayer assemble_rhs(const CellCoefficients& c, const CorrectorLayer* prev1,
                            bool prev1_identity, const CorrectorLayer* prev2,
                            bool prev2_identity) {
  CorrectorLayer rhs;
  PeriodicField unit = PeriodicField::constant(c.dim, c.n, 1.0);
  auto for_each = [&](const CorrectorLayer* layer, bool identity,
                      const std::function<void(const MultiIndex&, const PeriodicField&)>& fn) {
    if (identity) {
      fn(MultiIndex(c.dim, 0, 0), unit);
    } else if (layer) {
      for (const auto& [beta, field] : *layer) fn(beta, field);
    }
  };
  for_each(prev1, prev1_identity, [&](const MultiIndex& beta, const PeriodicField& g) {
    for (int i = 0; i < c.dim; ++i)
      add_to(rhs, beta.plus_space(i, 1), apply_mixed_column(c, i, g), 1.0);
  });
  for_each(prev2, prev2_identity, [&](const MultiIndex& beta, const PeriodicField& g) {
    for (int i = 0; i < c.dim; ++i)
      for (int j = 0; j < c.dim; ++j)
        add_to(rhs, beta.plus_space(i, 1).plus_space(j, 1), apply_entry_mult(c, i, j, g), 1.0);
    add_to(rhs, beta.plus_time(2), apply_rho_mult(c, g), -1.0);
  });
  return rhs;
}

// chi entries from assembled right-hand sides: one mean-free cell solve each,
// negated.
CorrectorLayer solve_layer(const CellCoefficients& c, CorrectorLayer rhs, double tol) {
  CorrectorLayer out;
  for (auto& [beta, r] : rhs) {
    r.subtract_mean();
    PeriodicField sol = solve_cell(c, r, tol);
    sol *= -1.0;
    out.emplace(beta, std::move(sol));
  }
  return out;
}

}  // namespace

const CorrectorLayer& CorrectorTable::layer(int k) const {
  if (k < 1 || k > max_order) throw TableTooShallow("corrector order " + std::to_string(k) +
                                                    " not in table (max " +
                                                    std::to_string(max_order) + ")");
  return layers[static_cast<std::size_t>(k) - 1];
}

const PeriodicField* CorrectorTable::find(int k, const MultiIndex& beta) const {
  const CorrectorLayer& l = layer(k);
  auto it = l.find(beta);
  return it == l.end() ? nullptr : &it->second;
}

CorrectorTable compute_correctors(const CellCoefficients& c, int max_order, double tol) {
  if (max_order < 1) throw BadInput("corrector order must be >= 1");
  CorrectorTable t;
  t.dim = c.dim;
  t.n = c.n;
  t.max_order = max_order;
  t.layers.reserve(static_cast<std::size_t>(max_order));
  for (int k = 1; k <= max_order; ++k) {
    const CorrectorLayer* prev1 = k >= 2 ? &t.layers[static_cast<std::size_t>(k) - 2] : nullptr;
    const CorrectorLayer* prev2 = k >= 3 ? &t.layers[static_cast<std::size_t>(k) - 3] : nullptr;
    CorrectorLayer rhs =
        assemble_rhs(c, prev1, /*prev1_identity=*/k == 1, prev2, /*prev2_identity=*/k == 2);
    t.layers.push_back(solve_layer(c, std::move(rhs), tol));
  }
  return t;
}

CorrectorLayer word_sum_layer(const CellCoefficients& c, int k, double tol) {
  if (k > 6) throw OrderTooLarge("word enumeration supported only through order 6");
  if (k < 1) throw BadInput("word order must be >= 1");

  // One letter applied to a whole layer: shift = 1 uses the mixed operator,
  // shift = 2 uses the coefficient entries and the density.
  auto apply_letter = [&c, tol](int shift, const CorrectorLayer* src, bool identity) {
    CorrectorLayer rhs = (shift == 1)
                             ? assemble_rhs(c, src, identity, nullptr, false)
                             : assemble_rhs(c, nullptr, false, src, identity);
    return solve_layer(c, std::move(rhs), tol);
  };

  CorrectorLayer total;
  // Enumerate compositions of k into parts {1, 2}; apply each word right to
  // left starting from the identity.
  std::vector<int> word;
  std::function<void()> recurse = [&]() {
    int sum = 0;
    for (int l : word) sum += l;
    if (sum == k) {
      CorrectorLayer cur;
      bool identity = true;
      for (auto it = word.rbegin(); it != word.rend(); ++it) {
        cur = apply_letter(*it, identity ? nullptr : &cur, identity);
        identity = false;
      }
      for (auto& [beta, field] : cur) add_to(total, beta, std::move(field), 1.0);
      return;
    }
    for (int l = 1; l <= 2 && sum + l <= k; ++l) {
      word.push_back(l);
      recurse();
      word.pop_back();
    }
  };
  recurse();
  return total;
}

double layer_distance(const CorrectorLayer& a, const CorrectorLayer& b) {
  double scale = 0.0;
  for (const auto& [beta, f] : a) scale = std::max(scale, f.norm_l2());
  for (const auto& [beta, f] : b) scale = std::max(scale, f.norm_l2());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  auto visit = [&](const CorrectorLayer& x, const CorrectorLayer& y) {
    for (const auto& [beta, f] : x) {
      auto it = y.find(beta);
      PeriodicField diff = f;
      if (it != y.end()) diff -= it->second;
      worst = std::max(worst, diff.norm_l2() / scale);
    }
  };
  visit(a, b);
  visit(b, a);
  return worst;
}

void dump_correctors(const CorrectorTable& t, std::ostream& out) {
  out << "longwave-correctors v1\n";
  out << t.dim << " " << t.n << " " << t.max_order << "\n";
  out.precision(17);
  for (int k = 1; k <= t.max_order; ++k) {
    for (const auto& [beta, f] : t.layer(k)) {
      out << k << " " << beta.str() << "\n";
      for (const auto& v : f.data()) out << v.real() << " " << v.imag() << "\n";
    }
  }
}

}  // namespace longwave
