#include "longwave/homog_ops.hpp"

#include <cmath>
#include <ostream>

namespace longwave {

HomogenizedPoly HomogenizedPoly::monomial(const MultiIndex& beta, double c) {
  HomogenizedPoly p(beta.dim, beta.order());
  p.terms.emplace(beta, c);
  return p;
}

double HomogenizedPoly::coeff(const MultiIndex& beta) const {
  auto it = terms.find(beta);
  return it == terms.end() ? 0.0 : it->second;
}

void HomogenizedPoly::add_term(const MultiIndex& beta, double c) {
  if (beta.order() != degree)
    throw BadInput("monomial order " + std::to_string(beta.order()) +
                   " does not match polynomial degree " + std::to_string(degree));
  terms[beta] += c;
}

double HomogenizedPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [beta, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

HomogenizedPoly HomogenizedPoly::time_component(int time_order) const {
  HomogenizedPoly out(dim, degree - time_order);
  for (const auto& [beta, c] : terms) {
    if (beta.time != time_order) continue;
    out.add_term(MultiIndex(beta.dim, 0, beta.space[0], beta.space[1]), c);
  }
  return out;
}

HomogenizedPoly HomogenizedPoly::times_time_power(int extra) const {
  HomogenizedPoly out(dim, degree + extra);
  for (const auto& [beta, c] : terms) out.add_term(beta.plus_time(extra), c);
  return out;
}

HomogenizedPoly HomogenizedPoly::space_part() const {
  HomogenizedPoly out(dim, degree);
  for (const auto& [beta, c] : terms)
    if (beta.time == 0) out.terms.emplace(beta, c);
  return out;
}

double HomogenizedPoly::time_mass() const {
  double m = 0.0;
  for (const auto& [beta, c] : terms)
    if (beta.time > 0) m = std::max(m, std::abs(c));
  return m;
}

HomogenizedPoly& HomogenizedPoly::operator+=(const HomogenizedPoly& o) {
  if (terms.empty() && o.terms.empty()) return *this;
  if (o.degree != degree && !o.terms.empty() && !terms.empty())
    throw BadInput("adding polynomials of different degree");
  if (terms.empty()) degree = o.degree;
  for (const auto& [beta, c] : o.terms) terms[beta] += c;
  return *this;
}

HomogenizedPoly& HomogenizedPoly::operator*=(double s) {
  for (auto& [beta, c] : terms) c *= s;
  return *this;
}

HomogenizedPoly multiply(const HomogenizedPoly& a, const HomogenizedPoly& b) {
  HomogenizedPoly out(a.dim, a.degree + b.degree);
  // Neumaier-compensated accumulation per monomial.
  std::map<MultiIndex, std::pair<double, double>> acc;
  for (const auto& [ba, ca] : a.terms)
    for (const auto& [bb, cb] : b.terms) {
      MultiIndex m(ba.dim, ba.time + bb.time, ba.space[0] + bb.space[0],
                   ba.space[1] + bb.space[1]);
      double v = ca * cb;
      auto& [sum, comp] = acc[m];
      double t = sum + v;
      if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
      else
        comp += (v - t) + sum;
      sum = t;
    }
  for (const auto& [beta, sc] : acc) out.terms[beta] = sc.first + sc.second;
  return out;
}

const HomogenizedPoly& OperatorSeries::at(int degree) const {
  auto it = by_degree.find(degree);
  if (it == by_degree.end())
    throw TableTooShallow("operator series has no degree " + std::to_string(degree));
  return it->second;
}

HomogenizedPoly compute_a_star(const CorrectorTable& table, const CellCoefficients& coeffs,
                               int n) {
  if (n < 1) throw BadInput("operator degree must be >= 1");
  if (table.max_order < n - 1)
    throw TableTooShallow("need correctors through order " + std::to_string(n - 1));
  HomogenizedPoly out(coeffs.dim, n);

  // (rho d_t^2 - coefficient pairs) applied to order n-2.
  auto from_two_below = [&](const MultiIndex& alpha, const PeriodicField& g) {
    out.add_term(alpha.plus_time(2), inner(coeffs.rho, g));
    for (int i = 0; i < coeffs.dim; ++i)
      for (int j = 0; j < coeffs.dim; ++j)
        out.add_term(alpha.plus_space(i, 1).plus_space(j, 1),
                     -inner(coeffs.a_entry(i, j), g));
  };
  // minus the mixed operator applied to order n-1: the divergence half
  // averages to zero, leaving -mean(a_{ik} d_k g) per column i.
  auto from_one_below = [&](const MultiIndex& alpha, const PeriodicField& g) {
    for (int i = 0; i < coeffs.dim; ++i) {
      double v = 0.0;
      for (int k = 0; k < coeffs.dim; ++k) v += inner(coeffs.a_entry(i, k), g.derivative(k));
      out.add_term(alpha.plus_space(i, 1), -v);
    }
  };

  PeriodicField unit = PeriodicField::constant(coeffs.dim, coeffs.n, 1.0);
  if (n == 2) {
    from_two_below(MultiIndex(coeffs.dim, 0, 0), unit);
  } else if (n > 2) {
    for (const auto& [alpha, g] : table.layer(n - 2)) from_two_below(alpha, g);
  }
  if (n == 1) {
    from_one_below(MultiIndex(coeffs.dim, 0, 0), unit);
  } else {
    for (const auto& [alpha, g] : table.layer(n - 1)) from_one_below(alpha, g);
  }
  return out;
}

OperatorSeries compute_a_star_series(const CorrectorTable& table,
                                     const CellCoefficients& coeffs, int max_degree,
                                     bool include_odd) {
  OperatorSeries s;
  s.dim = coeffs.dim;
  for (int n = 2; n <= max_degree; ++n) {
    if (n % 2 != 0 && !include_odd) continue;
    s.by_degree.emplace(n, compute_a_star(table, coeffs, n));
  }
  return s;
}

SymmetryReport check_symmetry_structure(const HomogenizedPoly& p) {
  SymmetryReport r;
  for (const auto& [beta, c] : p.terms)
    if (beta.time % 2 != 0) r.odd_time_mass = std::max(r.odd_time_mass, std::abs(c));
  if (p.degree % 2 != 0) r.odd_degree_mass = p.max_abs_coeff();
  return r;
}

double evaluate_symbol(const HomogenizedPoly& p, double tau, const double* xi) {
  static const double re_ipow[4] = {1.0, 0.0, -1.0, 0.0};
  double v = 0.0;
  for (const auto& [beta, c] : p.terms) {
    double re = re_ipow[beta.order() % 4];
    if (re == 0.0) continue;
    double mono = re * std::pow(tau, beta.time) * std::pow(xi[0], beta.space[0]);
    if (beta.dim == 2) mono *= std::pow(xi[1], beta.space[1]);
    v += c * mono;
  }
  return v;
}

double evaluate_symbol_1d(const HomogenizedPoly& p, double tau, double xi) {
  double x[2] = {xi, 0.0};
  return evaluate_symbol(p, tau, x);
}

double substitute(const HomogenizedPoly& p, double tau, double xi1, double xi2) {
  double acc = 0.0;
  for (const auto& [beta, c] : p.terms) {
    double v = c;
    for (int i = 0; i < beta.time; ++i) v *= tau;
    for (int i = 0; i < beta.space[0]; ++i) v *= xi1;
    for (int i = 0; i < beta.space[1]; ++i) v *= xi2;
    acc += v;
  }
  return acc;
}

void dump_poly(const HomogenizedPoly& p, std::ostream& out) {
  out.precision(17);
  for (const auto& [beta, c] : p.terms) out << p.degree << " " << beta.str() << " " << c << "\n";
}

void dump_series(const OperatorSeries& s, std::ostream& out) {
  out << "longwave-operators v1\n";
  for (const auto& [deg, p] : s.by_degree) dump_poly(p, out);
}

}  // namespace longwave
