#pragma once

#include <iosfwd>
#include <map>

#include "longwave/correctors.hpp"
#include "longwave/multi_index.hpp"

namespace longwave {

/** Homogeneous constant-coefficient differential operator of fixed total
 *  degree: monomials d_t^{bt} d_x^{bs} with |beta| = degree mapped to real
 *  coefficients. Reused for the effective operators of every degree and for
 *  the reduction polynomials built from them. */
struct HomogenizedPoly {
  int dim = 1;
  int degree = 0;
  std::map<MultiIndex, double> terms;

  HomogenizedPoly() = default;
  HomogenizedPoly(int dim_, int degree_) : dim(dim_), degree(degree_) {}
  static HomogenizedPoly monomial(const MultiIndex& beta, double c);

  double coeff(const MultiIndex& beta) const;
  /** Adds c to the coefficient of beta; beta must match the degree. */
  void add_term(const MultiIndex& beta, double c);
  double max_abs_coeff() const;
  bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }

  /** Coefficient polynomial of d_t^{time_order}: space-only, lower degree. */
  HomogenizedPoly time_component(int time_order) const;
  /** Multiply by d_t^{extra}. */
  HomogenizedPoly times_time_power(int extra) const;
  /** Monomials with no time derivative. */
  HomogenizedPoly space_part() const;
  /** Max |coefficient| over monomials with time_order > 0. */
  double time_mass() const;

  HomogenizedPoly& operator+=(const HomogenizedPoly& o);
  HomogenizedPoly& operator*=(double s);
  friend HomogenizedPoly operator+(HomogenizedPoly a, const HomogenizedPoly& b) { return a += b; }
  friend HomogenizedPoly operator*(double s, HomogenizedPoly a) { return a *= s; }
};

/** Product with compensated (Neumaier) accumulation per monomial, so the
 *  polynomial identities downstream hold to ~1e-15 relative. */
HomogenizedPoly multiply(const HomogenizedPoly& a, const HomogenizedPoly& b);

/** Effective operators by degree (even degrees 2, 4, ..., and odd degrees when
 *  computed for verification). */
struct OperatorSeries {
  int dim = 1;
  std::map<int, HomogenizedPoly> by_degree;

  const HomogenizedPoly& at(int degree) const;
  bool has(int degree) const { return by_degree.count(degree) != 0; }
};

/** Effective operator of total degree n from the corrector table:
 *  monomial-wise torus averages of (rho d_t^2 - two-derivative coefficients)
 *  applied to order n-2 minus the mixed operator applied to order n-1. */
HomogenizedPoly compute_a_star(const CorrectorTable& table, const CellCoefficients& coeffs,
                               int n);

/** All effective operators for 2 <= n <= max_degree (include_odd adds the
 *  analytically-vanishing odd degrees for verification). */
OperatorSeries compute_a_star_series(const CorrectorTable& table,
                                     const CellCoefficients& coeffs, int max_degree,
                                     bool include_odd = false);

struct SymmetryReport {
  double odd_time_mass = 0.0;    // max |coeff| over monomials with odd time order
  double odd_degree_mass = 0.0;  // max |coeff| if the polynomial degree is odd
};
SymmetryReport check_symmetry_structure(const HomogenizedPoly& p);

/** Evaluate the symbol with d_t -> i tau, d_xj -> i xi_j, taking the real
 *  part per monomial: even-degree polynomials give real symbols, so the
 *  degree-2 operator rho_bar d_t^2 + a2(d_x) evaluates to
 *  -rho_bar tau^2 + abar |xi|^2-form. Odd-total monomials contribute zero. */
double evaluate_symbol(const HomogenizedPoly& p, double tau, const double* xi);
double evaluate_symbol_1d(const HomogenizedPoly& p, double tau, double xi);

/** Plain polynomial substitution d_t -> tau, d_xj -> xi_j (no imaginary
 *  factors): the action of p on traveling profiles w(x - c t) is
 *  substitute(p, -c, 1) * w^(degree). */
double substitute(const HomogenizedPoly& p, double tau, double xi1, double xi2 = 0.0);

/** Text records (degree, beta, coefficient) in canonical order. */
void dump_poly(const HomogenizedPoly& p, std::ostream& out);
void dump_series(const OperatorSeries& s, std::ostream& out);

}  // namespace longwave
