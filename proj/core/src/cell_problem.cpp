#include "longwave/cell_problem.hpp"

#include <cmath>
#include <numbers>

namespace longwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PeriodicField apply_div_a_grad(const CellCoefficients& c, const PeriodicField& f) {
  PeriodicField out(c.dim, c.n);
  for (int j = 0; j < c.dim; ++j) {
    PeriodicField gj = f.derivative(j);
    for (int i = 0; i < c.dim; ++i) {
      PeriodicField flux = multiply(c.a_entry(i, j), gj);
      out += flux.derivative(i);
    }
  }
  return out;
}

PeriodicField apply_mixed_column(const CellCoefficients& c, int i, const PeriodicField& f) {
  PeriodicField out(c.dim, c.n);
  for (int j = 0; j < c.dim; ++j) {
    PeriodicField divpart = multiply(c.a_entry(j, i), f);
    out += divpart.derivative(j);
    out += multiply(c.a_entry(i, j), f.derivative(j));
  }
  return out;
}

PeriodicField apply_entry_mult(const CellCoefficients& c, int i, int j, const PeriodicField& f) {
  return multiply(c.a_entry(i, j), f);
}

PeriodicField apply_rho_mult(const CellCoefficients& c, const PeriodicField& f) {
  return multiply(c.rho, f);
}

PeriodicField solve_cell(const CellCoefficients& c, const PeriodicField& rhs,
                         double tol, int max_iter, CellSolveStats* stats) {
  double rhs_norm = rhs.norm_l2();
  if (std::abs(rhs.mean()) > 1e-10 * (rhs_norm + 1e-300))
    throw NonZeroMeanRHS("cell right-hand side has mean " + std::to_string(rhs.mean()));
  if (rhs_norm == 0.0) return PeriodicField(c.dim, c.n);

  // Solve (-div a grad) u = -rhs; the operator is SPD on mean-zero fields.
  PeriodicField b = rhs;
  b *= -1.0;
  b.subtract_mean();

  // The discrete operator annihilates the Nyquist mode (derivatives drop it),
  // so its range excludes that slot. Project the right-hand side accordingly;
  // otherwise CG chases an inconsistent component and never converges.
  if (c.n % 2 == 0) {
    int ny = c.n / 2;
    if (c.dim == 1) {
      b.set_coeff(ny, 0, 0.0);
    } else {
      for (int f = -c.n / 2 + 1; f <= c.n / 2; ++f) {
        b.set_coeff(ny, f, 0.0);
        b.set_coeff(f, ny, 0.0);
      }
    }
  }

  // Preconditioner: inverse of the constant-coefficient operator with the
  // mean tensor, diagonal in coefficient space.
  double m11 = c.a_entry(0, 0).mean();
  double m22 = c.dim == 2 ? c.a_entry(1, 1).mean() : 0.0;
  double m12 = c.dim == 2 ? c.a_entry(0, 1).mean() : 0.0;
  auto precondition = [&](const PeriodicField& r) {
    PeriodicField z(c.dim, c.n);
    int n = c.n;
    if (c.dim == 1) {
      for (int s = 0; s < n; ++s) {
        int f = fft_freq(s, n);
        if (f == 0) continue;
        double sym = kTwoPi * kTwoPi * m11 * f * f;
        z.data()[s] = r.data()[s] / sym;
      }
    } else {
      for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2) {
          int f1 = fft_freq(s1, n);
          int f2 = fft_freq(s2, n);
          if (f1 == 0 && f2 == 0) continue;
          double sym = kTwoPi * kTwoPi *
                       (m11 * f1 * f1 + 2.0 * m12 * f1 * f2 + m22 * f2 * f2);
          z.data()[static_cast<std::size_t>(s1) * n + s2] =
              r.data()[static_cast<std::size_t>(s1) * n + s2] / sym;
        }
    }
    return z;
  };
  auto op = [&](const PeriodicField& x) {
    PeriodicField y = apply_div_a_grad(c, x);
    y *= -1.0;
    y.subtract_mean();
    return y;
  };

  PeriodicField x(c.dim, c.n);
  PeriodicField r = b;
  PeriodicField z = precondition(r);
  PeriodicField p = z;
  double rz = inner(r, z);
  double b_norm = b.norm_l2();
  int it = 0;
  double rel = 1.0;
  for (; it < max_iter; ++it) {
    rel = r.norm_l2() / b_norm;
    if (rel <= tol) break;
    PeriodicField Ap = op(p);
    double alpha = rz / inner(p, Ap);
    Ap *= alpha;
    PeriodicField step = p;
    step *= alpha;
    x += step;
    r -= Ap;
    z = precondition(r);
    double rz_new = inner(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    PeriodicField p_new = z;
    p *= beta;
    p_new += p;
    p = p_new;
  }
  if (stats) {
    stats->iterations = it;
    stats->rel_residual = rel;
  }
  if (rel > tol)
    throw NoConvergence("cell solve stalled at relative residual " + std::to_string(rel) +
                        " after " + std::to_string(it) + " iterations");
  x.subtract_mean();
  x.enforce_real();
  return x;
}

}  // namespace longwave
