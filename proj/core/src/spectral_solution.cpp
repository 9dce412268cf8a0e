#include "longwave/spectral_solution.hpp"

#include <cmath>
#include <numbers>

#include "longwave/torus_field.hpp"

namespace longwave {

double BoxGrid::xi(int slot) const {
  return 2.0 * std::numbers::pi * fft_freq(slot, n) / length;
}

void BoxGrid::validate() const {
  if (!(length > 0.0)) throw BadConfig("box length must be positive");
  if (n < 2 || n % 2 != 0) throw BadConfig("mode count must be even and >= 2");
}

cplx i_xi_pow(double xi, int p) {
  static const cplx ipow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return ipow[p % 4] * std::pow(xi, p);
}

SpectralSolution::SpectralSolution(SpectralSolutionData d) : d_(std::move(d)) {
  d_.grid.validate();
  std::size_t n = static_cast<std::size_t>(d_.grid.n);
  if (d_.mu.size() != n || d_.active.size() != n || d_.post.size() != n ||
      d_.checkpoints.size() != n)
    throw BadInput("spectral solution arrays do not match the grid");
  // Eager derivative towers for the closed-form phase keep evaluation
  // lock-free and the object immutable.
  post_derivs_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (!d_.active[s]) continue;
    auto& tower = post_derivs_[s];
    tower.reserve(static_cast<std::size_t>(d_.max_deriv) + 1);
    tower.push_back(d_.post[s]);
    for (int k = 1; k <= d_.max_deriv; ++k) tower.push_back(tower.back().derivative());
  }
}

cplx SpectralSolution::post_value(int slot, double t, int deriv) const {
  const auto& tower = post_derivs_[static_cast<std::size_t>(slot)];
  if (deriv >= static_cast<int>(tower.size()))
    throw InsufficientDerivatives("time derivative order " + std::to_string(deriv) +
                                  " exceeds declared support " + std::to_string(d_.max_deriv));
  return tower[static_cast<std::size_t>(deriv)].eval(t);
}

OscState SpectralSolution::mode_state(int slot, double t) const {
  OscState s;
  if (!active(slot) || t <= 0.0) return s;
  if (t >= d_.t_off) {
    s.v = post_value(slot, t, 0);
    s.vt = post_value(slot, t, 1);
    return s;
  }
  // Re-march deterministically from the nearest checkpoint at or below t.
  const auto& cps = d_.checkpoints[static_cast<std::size_t>(slot)];
  double dt = d_.dt;
  int stride = d_.checkpoint_stride;
  int step = static_cast<int>(std::floor(t / dt + 1e-12));
  int cp = std::min(step / stride, static_cast<int>(cps.size()) - 1);
  OscState cur = cps[static_cast<std::size_t>(cp)];
  double rho = d_.rho_bar;
  double mu = d_.mu[static_cast<std::size_t>(slot)];
  auto src = [&](double tau) { return d_.source ? d_.source->eval(slot, tau, 0) : cplx(0.0, 0.0); };
  for (int i = cp * stride; i < step; ++i)
    cur = exp_step(rho, mu, cur, i * dt, dt, src);
  double rem = t - step * dt;
  if (rem > 1e-14 * d_.t_off) cur = exp_step(rho, mu, cur, step * dt, rem, src);
  return cur;
}

cplx SpectralSolution::mode_value(int slot, double t, int time_deriv) const {
  if (!active(slot) || t <= 0.0) return cplx(0.0, 0.0);
  if (time_deriv > d_.max_deriv)
    throw InsufficientDerivatives("time derivative order " + std::to_string(time_deriv) +
                                  " exceeds declared support " + std::to_string(d_.max_deriv));
  if (t >= d_.t_off) return post_value(slot, t, time_deriv);
  OscState s = mode_state(slot, t);
  if (time_deriv == 0) return s.v;
  if (time_deriv == 1) return s.vt;
  // rho v'' = S - mu v applied recursively:
  // v^{(d)} = (S^{(d-2)} - mu v^{(d-2)}) / rho.
  double mu = d_.mu[static_cast<std::size_t>(slot)];
  cplx d0 = s.v, d1 = s.vt;
  cplx out(0.0, 0.0);
  for (int d = 2; d <= time_deriv; ++d) {
    cplx src = d_.source ? d_.source->eval(slot, t, d - 2) : cplx(0.0, 0.0);
    cplx lower = (d % 2 == 0) ? d0 : d1;
    out = (src - mu * lower) / d_.rho_bar;
    if (d % 2 == 0)
      d0 = out;
    else
      d1 = out;
  }
  return out;
}

double SpectralSolution::mode_energy(int slot, double t) const {
  OscState s = mode_state(slot, t);
  return d_.rho_bar * std::norm(s.vt) + d_.mu[static_cast<std::size_t>(slot)] * std::norm(s.v);
}

std::vector<double> synthesize_slots(const BoxGrid& grid, const std::vector<cplx>& coeff,
                                     int N, double offset) {
  int n = grid.n;
  if (static_cast<int>(coeff.size()) != n) throw BadInput("coefficient array does not match grid");
  if (N < n) throw BadInput("synthesis lattice coarser than the mode grid");
  std::vector<cplx> buf(static_cast<std::size_t>(N), cplx(0.0, 0.0));
  double L = grid.length;
  for (int s = 0; s < n; ++s) {
    cplx v = coeff[static_cast<std::size_t>(s)];
    if (v == cplx(0.0, 0.0)) continue;
    double xi = grid.xi(s);
    // lattice starts at -L/2 + offset
    v *= std::polar(1.0, xi * (offset - 0.5 * L));
    buf[static_cast<std::size_t>(fft_slot(fft_freq(s, n), N))] = v;
  }
  fft_inverse(1, N, buf.data());
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

std::vector<double> SpectralSolution::synthesize(const MultiIndex& beta, double t, int N,
                                                 double offset) const {
  int n = d_.grid.n;
  std::vector<cplx> coeff(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int s = 0; s < n; ++s) {
    if (!active(s)) continue;
    cplx v = mode_value(s, t, beta.time);
    if (v == cplx(0.0, 0.0)) continue;
    coeff[static_cast<std::size_t>(s)] = v * i_xi_pow(d_.grid.xi(s), beta.space[0]);
  }
  return synthesize_slots(d_.grid, coeff, N, offset);
}

double SpectralSolution::norm_l2(const MultiIndex& beta, double t) const {
  double acc = 0.0;
  for (int s = 0; s < d_.grid.n; ++s) {
    if (!active(s)) continue;
    cplx v = mode_value(s, t, beta.time);
    double xi = d_.grid.xi(s);
    acc += std::norm(v) * std::pow(std::abs(xi), 2 * beta.space[0]);
  }
  return std::sqrt(d_.grid.length * acc);
}

}  // namespace longwave
