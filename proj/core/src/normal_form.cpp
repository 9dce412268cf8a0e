#include "longwave/normal_form.hpp"

#include <cmath>

namespace longwave {

namespace {

// Scale for relative thresholds: |rho_bar| and the largest |coefficient|
// appearing in the input series.
double series_scale(const OperatorSeries& s) {
  double m = 0.0;
  for (const auto& [deg, p] : s.by_degree) m = std::max(m, p.max_abs_coeff());
  return m;
}

}  // namespace

const HomogenizedPoly& NormalForm::R_of_degree(int deg) const {
  if (deg < 2 || deg % 2 != 0 || deg / 2 > static_cast<int>(R.size()))
    throw BadInput("no reduction operator of degree " + std::to_string(deg));
  return R[static_cast<std::size_t>(deg) / 2 - 1];
}

const HomogenizedPoly& NormalForm::a_tilde_of_degree(int deg) const {
  if (deg < 4 || deg % 2 != 0 || deg / 2 - 1 > static_cast<int>(a_tilde.size()))
    throw BadInput("no corrected operator of degree " + std::to_string(deg));
  return a_tilde[static_cast<std::size_t>(deg) / 2 - 2];
}

NormalForm eliminate_time_derivatives(const OperatorSeries& series) {
  const HomogenizedPoly& a2_full = series.at(2);
  NormalForm nf;
  nf.dim = series.dim;
  nf.rho_bar = a2_full.coeff(MultiIndex(series.dim, 2, 0));
  nf.a2 = a2_full.space_part();
  if (!(nf.rho_bar > 0.0))
    throw DegenerateA2("degree-2 operator has non-positive mass " +
                       std::to_string(nf.rho_bar));
  if (nf.a2.max_abs_coeff() == 0.0)
    throw DegenerateA2("degree-2 operator has no spatial part");

  int max_degree = series.by_degree.rbegin()->first;
  int k = max_degree / 2 - 1;
  nf.k = k;
  double scale = series_scale(series);

  for (int j = 1; j <= k; ++j) {
    int D = 2 * j + 2;
    // p = a*_D + sum_{i<j} R_{2i} a*_{D-2i}  (the i = j term is reserved for
    // the a_tilde definition below).
    HomogenizedPoly p = series.at(D);
    for (int i = 1; i < j; ++i) p += multiply(nf.R[i - 1], series.at(D - 2 * i));

    // Peel the time structure: s_{2m} is the space polynomial attached to
    // d_t^{D-2m}.
    std::vector<HomogenizedPoly> q;  // q[m] space-only, degree 2m
    for (int m = 0; m <= (D - 2) / 2; ++m) {
      HomogenizedPoly s2m = p.time_component(D - 2 * m);
      HomogenizedPoly qm = s2m;
      if (m >= 1) qm += multiply(q[static_cast<std::size_t>(m) - 1], nf.a2);
      qm *= -1.0 / nf.rho_bar;
      q.push_back(std::move(qm));
    }
    HomogenizedPoly R2j(series.dim, D - 2);
    for (int m = 0; m <= (D - 2) / 2; ++m) R2j += q[m].times_time_power(D - 2 - 2 * m);
    // a_tilde_D = p + R_{2j} a*_2; time parts cancel by construction.
    HomogenizedPoly tilde = p + multiply(R2j, a2_full);
    double dust = tilde.time_mass();
    nf.elimination_dust = std::max(nf.elimination_dust, dust / (scale + 1e-300));
    if (dust > 1e-10 * (scale + std::abs(nf.rho_bar)))
      throw BadInput("time cancellation failed in elimination (residue " +
                     std::to_string(dust) + ")");
    nf.R.push_back(std::move(R2j));
    nf.a_tilde.push_back(tilde.space_part());
  }
  return nf;
}

std::vector<HomogenizedPoly> invert_R_series(const NormalForm& nf) {
  int max_deg = 2 * nf.k;
  // Geometric series sum_{m>=1} (-sum R)^m, truncated beyond degree 2k.
  std::map<int, HomogenizedPoly> neg;  // -R by degree
  for (const auto& r : nf.R) {
    HomogenizedPoly m = r;
    m *= -1.0;
    neg.emplace(m.degree, std::move(m));
  }
  std::map<int, HomogenizedPoly> acc;    // running total
  std::map<int, HomogenizedPoly> power;  // (-sum R)^m by degree
  power = neg;
  for (int m = 1; 2 * m <= max_deg; ++m) {
    for (const auto& [deg, p] : power) {
      auto it = acc.find(deg);
      if (it == acc.end())
        acc.emplace(deg, p);
      else
        it->second += p;
    }
    // next power, truncated
    std::map<int, HomogenizedPoly> next;
    for (const auto& [d1, p1] : power)
      for (const auto& [d2, p2] : neg) {
        if (d1 + d2 > max_deg) continue;
        HomogenizedPoly prod = multiply(p1, p2);
        auto it = next.find(d1 + d2);
        if (it == next.end())
          next.emplace(d1 + d2, std::move(prod));
        else
          it->second += prod;
      }
    power = std::move(next);
  }
  std::vector<HomogenizedPoly> out;
  for (int deg = 2; deg <= max_deg; deg += 2) {
    auto it = acc.find(deg);
    out.push_back(it == acc.end() ? HomogenizedPoly(nf.dim, deg) : it->second);
  }
  return out;
}

ReductionReport verify_inverse_reduction(const NormalForm& nf, const OperatorSeries& series,
                                         const std::vector<HomogenizedPoly>& R_tilde) {
  ReductionReport rep;
  int max_degree = 2 * nf.k + 2;
  double scale = series_scale(series) + 1e-300;

  // corrected series: a*_2 + sum a_tilde
  std::map<int, HomogenizedPoly> corrected;
  corrected.emplace(2, series.at(2));
  for (const auto& t : nf.a_tilde) corrected.emplace(t.degree, t);

  // lhs = (1 + sum R_tilde) * corrected, truncated to max_degree
  std::map<int, HomogenizedPoly> lhs = corrected;
  for (const auto& rt : R_tilde)
    for (const auto& [deg, p] : corrected) {
      if (rt.degree + deg > max_degree) continue;
      HomogenizedPoly prod = multiply(rt, p);
      auto it = lhs.find(prod.degree);
      if (it == lhs.end())
        lhs.emplace(prod.degree, std::move(prod));
      else
        it->second += prod;
    }
  for (int deg = 2; deg <= max_degree; deg += 2) {
    HomogenizedPoly diff = series.at(deg);
    diff *= -1.0;
    auto it = lhs.find(deg);
    if (it != lhs.end()) diff += it->second;
    rep.max_residual_rel = std::max(rep.max_residual_rel, diff.max_abs_coeff() / scale);
  }

  // (1 + R_tilde)(1 + R) - 1 through degree 2k
  double rscale = 1e-300;
  for (const auto& r : nf.R) rscale = std::max(rscale, r.max_abs_coeff());
  std::map<int, HomogenizedPoly> unit_prod;
  for (const auto& r : nf.R) unit_prod.emplace(r.degree, r);
  for (const auto& rt : R_tilde) {
    auto it = unit_prod.find(rt.degree);
    if (it == unit_prod.end())
      unit_prod.emplace(rt.degree, rt);
    else
      it->second += rt;
    for (const auto& r : nf.R) {
      if (rt.degree + r.degree > 2 * nf.k) continue;
      HomogenizedPoly prod = multiply(rt, r);
      auto it2 = unit_prod.find(prod.degree);
      if (it2 == unit_prod.end())
        unit_prod.emplace(prod.degree, std::move(prod));
      else
        it2->second += prod;
    }
  }
  for (const auto& [deg, p] : unit_prod)
    rep.inverse_residual_rel = std::max(rep.inverse_residual_rel, p.max_abs_coeff() / rscale);
  return rep;
}

}  // namespace longwave
