#include "longwave/sampler.hpp"

#include <cmath>

#include "longwave/errors.hpp"

namespace longwave {

namespace {

double frac01(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;
  return f;
}

/** Direct Fourier sum of d^beta u at one point (slow; for cross-checks). */
double profile_deriv_at(const SpectralSolution& u, const MultiIndex& beta, double t,
                        double x) {
  const BoxGrid& g = u.grid();
  cplx acc(0.0, 0.0);
  for (int s = 0; s < g.n; ++s) {
    if (!u.active(s)) continue;
    cplx v = u.mode_value(s, t, beta.time);
    if (v == cplx(0.0, 0.0)) continue;
    const double xi = g.xi(s);
    acc += v * i_xi_pow(xi, beta.space[0]) * std::polar(1.0, xi * x);
  }
  return acc.real();
}

}  // namespace

TwoScaleSampler::TwoScaleSampler(const CorrectorTable& table, double eps,
                                 std::vector<SamplerPiece> pieces)
    : eps_(eps), pieces_(std::move(pieces)) {
  if (!(eps_ > 0.0)) throw BadInput("two-scale sampler needs eps > 0");
  if (pieces_.empty()) throw BadInput("two-scale sampler needs at least one piece");
  if (table.dim != 1) throw BadInput("lattice sampling handles one-dimensional cells only");
  for (const auto& p : pieces_) {
    if (!p.profile) throw BadInput("sampler piece without a profile");
    if (p.corrector_orders < 0) throw BadInput("negative corrector order");
    if (p.corrector_orders > table.max_order)
      throw TableTooShallow("corrector table holds orders <= " + std::to_string(table.max_order));
  }
  grid_ = pieces_.front().profile->grid();
  for (const auto& p : pieces_) {
    const BoxGrid& g = p.profile->grid();
    if (g.length != grid_.length || g.n != grid_.n)
      throw BadInput("sampler pieces live on different boxes");
  }

  entries_.resize(pieces_.size());
  for (std::size_t pi = 0; pi < pieces_.size(); ++pi) {
    const auto& piece = pieces_[pi];
    Entry id;
    id.beta = MultiIndex(1, 0, 0);
    id.identity = true;
    id.weight = piece.prefactor;
    entries_[pi].push_back(std::move(id));
    double scale = eps_;
    for (int k = 1; k <= piece.corrector_orders; ++k) {
      for (const auto& [beta, field] : table.layer(k)) {
        Entry e;
        e.beta = beta;
        e.identity = false;
        e.field = field;
        e.deriv = field.derivative(0);
        e.weight = piece.prefactor * scale;
        entries_[pi].push_back(std::move(e));
      }
      scale *= eps_;
    }
  }
}

std::vector<double> TwoScaleSampler::lattice(Deriv d, double t, int N) const {
  if (N < grid_.n) throw BadInput("sampling lattice coarser than the mode grid");
  const double L = grid_.length;

  // Cell phases theta_i = frac(x_i / eps) recur with period p when
  // p L / (N eps) is an integer; fall back to per-point phases otherwise.
  int p = N;
  for (int cand = 1; cand < N; ++cand) {
    if (N % cand != 0) continue;
    const double r = static_cast<double>(cand) * L / (static_cast<double>(N) * eps_);
    if (std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, std::abs(r))) {
      p = cand;
      break;
    }
  }
  std::vector<double> theta(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    const double x = -0.5 * L + L * static_cast<double>(i) / N;
    theta[static_cast<std::size_t>(i)] = frac01(x / eps_);
  }

  std::vector<double> acc(static_cast<std::size_t>(N), 0.0);
  std::vector<double> cv(static_cast<std::size_t>(p)), dv(static_cast<std::size_t>(p));
  for (std::size_t pi = 0; pi < pieces_.size(); ++pi) {
    const auto& profile = *pieces_[pi].profile;
    for (const auto& e : entries_[pi]) {
      if (!e.identity) {
        for (int i = 0; i < p; ++i) {
          cv[static_cast<std::size_t>(i)] = e.field.eval(theta[static_cast<std::size_t>(i)]);
          dv[static_cast<std::size_t>(i)] = e.deriv.eval(theta[static_cast<std::size_t>(i)]);
        }
      } else {
        std::fill(cv.begin(), cv.end(), 1.0);
        std::fill(dv.begin(), dv.end(), 0.0);
      }
      switch (d) {
        case Deriv::Value: {
          std::vector<double> arr = profile.synthesize(e.beta, t, N);
          for (int i = 0; i < N; ++i)
            acc[static_cast<std::size_t>(i)] +=
                e.weight * cv[static_cast<std::size_t>(i % p)] * arr[static_cast<std::size_t>(i)];
          break;
        }
        case Deriv::Dt: {
          std::vector<double> arr = profile.synthesize(e.beta.plus_time(1), t, N);
          for (int i = 0; i < N; ++i)
            acc[static_cast<std::size_t>(i)] +=
                e.weight * cv[static_cast<std::size_t>(i % p)] * arr[static_cast<std::size_t>(i)];
          break;
        }
        case Deriv::Dx: {
          std::vector<double> arr = profile.synthesize(e.beta.plus_space(0, 1), t, N);
          for (int i = 0; i < N; ++i)
            acc[static_cast<std::size_t>(i)] +=
                e.weight * cv[static_cast<std::size_t>(i % p)] * arr[static_cast<std::size_t>(i)];
          if (!e.identity) {
            std::vector<double> base = profile.synthesize(e.beta, t, N);
            const double w = e.weight / eps_;
            for (int i = 0; i < N; ++i)
              acc[static_cast<std::size_t>(i)] += w * dv[static_cast<std::size_t>(i % p)] *
                                                  base[static_cast<std::size_t>(i)];
          }
          break;
        }
      }
    }
  }
  return acc;
}

double TwoScaleSampler::point(Deriv d, double t, double x) const {
  const double theta = frac01(x / eps_);
  double acc = 0.0;
  for (std::size_t pi = 0; pi < pieces_.size(); ++pi) {
    const auto& profile = *pieces_[pi].profile;
    for (const auto& e : entries_[pi]) {
      const double c = e.identity ? 1.0 : e.field.eval(theta);
      switch (d) {
        case Deriv::Value:
          acc += e.weight * c * profile_deriv_at(profile, e.beta, t, x);
          break;
        case Deriv::Dt:
          acc += e.weight * c * profile_deriv_at(profile, e.beta.plus_time(1), t, x);
          break;
        case Deriv::Dx:
          acc += e.weight * c * profile_deriv_at(profile, e.beta.plus_space(0, 1), t, x);
          if (!e.identity)
            acc += (e.weight / eps_) * e.deriv.eval(theta) * profile_deriv_at(profile, e.beta, t, x);
          break;
      }
    }
  }
  return acc;
}

TwoScaleSampler apply_corrector_series(const CorrectorTable& table, int order,
                                       std::shared_ptr<const SpectralSolution> profile,
                                       double eps) {
  std::vector<SamplerPiece> pieces;
  pieces.push_back(SamplerPiece{std::move(profile), 1.0, order});
  return TwoScaleSampler(table, eps, std::move(pieces));
}

}  // namespace longwave
