#include "longwave/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "longwave/errors.hpp"

namespace longwave {

namespace {

// Does mu_eps stay above half the leading floor on the cutoff region?
// Beyond psi2_outer the corrections are switched off exactly, so only
// |xi| <= psi2_outer * eps^{-alpha} needs scanning.
bool symbol_positive(const HomogenizedPoly& a2, const std::vector<HomogenizedPoly>& tails,
                     const FilterSpec& filter, double floor, double eps) {
  const double xi_max = filter.psi2_outer * std::pow(eps, -filter.alpha);
  const int n_scan = 4096;
  for (int i = 1; i <= n_scan; ++i) {
    const double xi = xi_max * static_cast<double>(i) / n_scan;
    double corr = 0.0;
    double scale = eps * eps;  // eps^{2j-2}, j = 2
    for (const auto& p : tails) {
      corr += scale * evaluate_symbol_1d(p, 0.0, xi);
      scale *= eps * eps;
    }
    const double mu = evaluate_symbol_1d(a2, 0.0, xi) +
                      filter.psi2(std::pow(eps, filter.alpha) * xi) * corr;
    if (mu < 0.5 * floor * xi * xi) return false;
  }
  return true;
}

}  // namespace

DispersionSymbol::DispersionSymbol(const NormalForm& nf, int k, double eps, FilterSpec filter)
    : k_(k), eps_(eps), filter_(filter) {
  filter_.validate();
  if (k < 1 || k > nf.k) {
    throw BadInput("dispersion order k = " + std::to_string(k) +
                   " not covered by a normal form of order " + std::to_string(nf.k));
  }
  if (nf.dim != 1) throw BadInput("dispersive solver handles one-dimensional media only");
  if (!(eps > 0.0)) throw BadInput("eps must be positive");
  rho_bar_ = nf.rho_bar;
  a2_ = nf.a2;
  a2_floor_ = evaluate_symbol_1d(a2_, 0.0, 1.0);
  if (!(a2_floor_ > 0.0)) throw DegenerateA2("leading symbol is not positive definite");
  for (int j = 2; j <= k + 1; ++j) a_tilde_.push_back(nf.a_tilde_of_degree(2 * j));

  if (symbol_positive(a2_, a_tilde_, filter_, a2_floor_, 1.0)) {
    eps0_ = 1.0;
  } else {
    double lo = 1e-6, hi = 1.0;
    if (!symbol_positive(a2_, a_tilde_, filter_, a2_floor_, lo)) {
      eps0_ = 0.0;
    } else {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (symbol_positive(a2_, a_tilde_, filter_, a2_floor_, mid) ? lo : hi) = mid;
      }
      eps0_ = lo;
    }
  }
}

double DispersionSymbol::correction_sum(double xi) const {
  double corr = 0.0;
  double scale = eps_ * eps_;
  for (const auto& p : a_tilde_) {
    corr += scale * evaluate_symbol_1d(p, 0.0, xi);
    scale *= eps_ * eps_;
  }
  return corr;
}

double DispersionSymbol::operator()(double xi) const {
  const double r = std::pow(eps_, filter_.alpha) * std::abs(xi);
  const double psi2 = filter_.psi2(r);
  double mu = evaluate_symbol_1d(a2_, 0.0, xi);
  if (psi2 > 0.0) mu += psi2 * correction_sum(xi);
  return mu;
}

double DispersionSymbol::unfiltered(double xi) const {
  return evaluate_symbol_1d(a2_, 0.0, xi) + correction_sum(xi);
}

DispersionSymbol build_symbol(const NormalForm& nf, int k, double eps,
                              const FilterSpec& filter) {
  DispersionSymbol sym(nf, k, eps, filter);
  if (eps > sym.eps0()) {
    std::ostringstream msg;
    msg << "eps = " << eps << " exceeds the positivity threshold eps0 = " << sym.eps0()
        << " of the order-" << k << " filtered symbol";
    throw EpsilonTooLarge(msg.str());
  }
  return sym;
}

RForcing::RForcing(const NormalForm& nf, int k, double eps, SourceTerm f)
    : eps_(eps), f_(std::move(f)) {
  if (k < 0 || k > nf.k) throw BadInput("reduction order k not covered by the normal form");
  weight_.assign(static_cast<std::size_t>(2 * k + 1),
                 std::vector<double>(static_cast<std::size_t>(2 * k + 1), 0.0));
  weight_[0][0] = 1.0;
  double scale = eps * eps;  // eps^{2j}, j = 1
  for (int j = 1; j <= k; ++j) {
    for (const auto& [beta, c] : nf.R[static_cast<std::size_t>(j - 1)].terms) {
      weight_[static_cast<std::size_t>(beta.time)][static_cast<std::size_t>(beta.space[0])] +=
          scale * c;
    }
    scale *= eps * eps;
  }
}

cplx RForcing::eval_xi(double xi, double t, int deriv) const {
  cplx acc(0.0, 0.0);
  for (std::size_t d = 0; d < weight_.size(); ++d) {
    cplx w(0.0, 0.0);
    for (std::size_t bx = 0; bx < weight_[d].size(); ++bx) {
      if (weight_[d][bx] != 0.0) w += weight_[d][bx] * i_xi_pow(xi, static_cast<int>(bx));
    }
    if (w != cplx(0.0, 0.0)) {
      acc += w * f_.pulse.derivative(static_cast<int>(d) + deriv, t);
    }
  }
  return acc * f_.profile.fourier(xi);
}

int RForcing::max_time_order() const {
  int top = 0;
  for (std::size_t d = 0; d < weight_.size(); ++d) {
    for (double w : weight_[d]) {
      if (w != 0.0) top = std::max(top, static_cast<int>(d));
    }
  }
  return top;
}

namespace {

/** Forcing of the one-equation model on a box: psi1-gated reduction of the
 *  source, divided by the box length (series coefficients vs transforms). */
class FilteredModeSource final : public ModeSource {
 public:
  FilteredModeSource(RForcing r, BoxGrid grid, std::vector<double> gate)
      : r_(std::move(r)), grid_(grid), gate_(std::move(gate)) {}

  cplx eval(int slot, double t, int deriv) const override {
    const double g = gate_[static_cast<std::size_t>(slot)];
    if (g == 0.0) return {0.0, 0.0};
    return g * r_.eval_xi(grid_.xi(slot), t, deriv);
  }

 private:
  RForcing r_;
  BoxGrid grid_;
  std::vector<double> gate_;  // psi1 / L per slot
};

}  // namespace

SpectralSolution solve_filtered(const NormalForm& nf, int k, double eps,
                                const FilterSpec& filter, const SourceTerm& f,
                                double box_length, int n_modes, double horizon,
                                double dt) {
  DispersionSymbol sym = build_symbol(nf, k, eps, filter);
  SpectralSolutionData data;
  data.grid = BoxGrid{box_length, n_modes};
  data.grid.validate();
  data.rho_bar = nf.rho_bar;
  data.t_off = 1.0;
  if (!(dt > 0.0 && dt <= data.t_off)) throw BadInput("phase-1 step dt out of range");

  // Propagation check: the fastest group speed over the active band, applied
  // for `horizon`, must keep the wave packet inside half the box.
  const double xi_act = filter.psi1_outer * std::pow(eps, -filter.alpha);
  double c_max = std::sqrt(sym.a2_floor() / nf.rho_bar);
  {
    const int n_scan = 2048;
    const double dxi = xi_act / n_scan;
    for (int i = 1; i < n_scan; ++i) {
      const double xi = i * dxi;
      const double wm = std::sqrt(std::max(0.0, sym(xi - 0.5 * dxi)) / nf.rho_bar);
      const double wp = std::sqrt(std::max(0.0, sym(xi + 0.5 * dxi)) / nf.rho_bar);
      c_max = std::max(c_max, std::abs(wp - wm) / dxi);
    }
  }
  const double reach = std::abs(f.profile.center) + 8.5 * f.profile.width + c_max * horizon;
  if (reach > 0.5 * box_length) {
    std::ostringstream msg;
    msg << "box of length " << box_length << " wraps before t = " << horizon
        << " (group speed " << c_max << " needs length >= " << 2.0 * reach << ")";
    throw BoxTooSmall(msg.str());
  }

  const std::size_t n = static_cast<std::size_t>(n_modes);
  data.mu.assign(n, 0.0);
  data.active.assign(n, 0);
  data.checkpoints.assign(n, {});
  data.post.assign(n, PolyExp{});
  data.max_deriv = 2 * k + 6;

  std::vector<double> gate(n, 0.0);
  const double ea = std::pow(eps, filter.alpha);
  // Relative forcing cutoff: modes below 1e-30 of the peak amplitude are
  // dropped (they are invisible at every tolerance used downstream).  The
  // spectrum of a dipole profile peaks near 1/width instead of 0.
  const double f_peak = std::max(std::abs(f.profile.fourier(0.0)),
                                 std::abs(f.profile.fourier(1.0 / f.profile.width)));
  for (std::size_t s = 0; s < n; ++s) {
    const double xi = data.grid.xi(static_cast<int>(s));
    data.mu[s] = sym(xi);
    const double psi1 = filter.psi1(ea * std::abs(xi));
    if (psi1 > 0.0 && std::abs(f.profile.fourier(xi)) > 1e-30 * f_peak) {
      data.active[s] = 1;
      gate[s] = psi1 / box_length;
    }
  }

  auto src = std::make_shared<FilteredModeSource>(RForcing(nf, k, eps, f), data.grid, gate);
  data.source = src;

  int n_steps = static_cast<int>(std::ceil(data.t_off / dt - 1e-12));
  n_steps = ((n_steps + data.checkpoint_stride - 1) / data.checkpoint_stride) *
            data.checkpoint_stride;
  const double h = data.t_off / n_steps;
  data.dt = h;

  for (std::size_t s = 0; s < n; ++s) {
    if (!data.active[s]) continue;
    const int slot = static_cast<int>(s);
    auto S = [&](double t) { return src->eval(slot, t, 0); };
    OscState state;
    auto& cps = data.checkpoints[s];
    cps.reserve(static_cast<std::size_t>(n_steps / data.checkpoint_stride) + 1);
    cps.push_back(state);
    for (int i = 0; i < n_steps; ++i) {
      state = exp_step(data.rho_bar, data.mu[s], state, i * h, h, S);
      if ((i + 1) % data.checkpoint_stride == 0) cps.push_back(state);
    }
    data.post[s] = homogeneous_from_state(data.rho_bar, data.mu[s], state, data.t_off);
  }

  return SpectralSolution(std::move(data));
}

}  // namespace longwave
