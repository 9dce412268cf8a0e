#include "longwave/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "longwave/errors.hpp"
#include "longwave/metrics.hpp"
#include "longwave/mode_ode.hpp"

namespace longwave {

namespace {

struct CascadeTerm {
  int lower = 0;   // level index of the driven profile
  int bt = 0;      // time-derivative order of the monomial
  int bs = 0;      // space-derivative order
  double c = 0.0;  // operator coefficient; the forcing contribution is -c
};

std::vector<CascadeTerm> level_terms(const OperatorSeries& ops, int j) {
  std::vector<CascadeTerm> out;
  for (int m = 2; m <= j + 1; ++m) {
    for (const auto& [beta, c] : ops.at(2 * m).terms) {
      if (c == 0.0) continue;
      out.push_back({j + 1 - m, beta.time, beta.space[0], c});
    }
  }
  return out;
}

class Level0Source final : public ModeSource {
 public:
  Level0Source(SourceTerm f, BoxGrid grid) : f_(std::move(f)) {
    fhat_.resize(static_cast<std::size_t>(grid.n));
    for (int s = 0; s < grid.n; ++s)
      fhat_[static_cast<std::size_t>(s)] = f_.profile.fourier(grid.xi(s)) / grid.length;
  }
  cplx eval(int slot, double t, int deriv) const override {
    return fhat_[static_cast<std::size_t>(slot)] * f_.pulse.derivative(deriv, t);
  }

 private:
  SourceTerm f_;
  std::vector<cplx> fhat_;
};

class CascadeSource final : public ModeSource {
 public:
  CascadeSource(std::vector<CascadeTerm> terms,
                std::vector<std::shared_ptr<const SpectralSolution>> lowers, BoxGrid grid)
      : terms_(std::move(terms)), lowers_(std::move(lowers)), grid_(grid) {}
  cplx eval(int slot, double t, int deriv) const override {
    cplx acc(0.0, 0.0);
    const double xi = grid_.xi(slot);
    for (const auto& tm : terms_) {
      const cplx w = -tm.c * i_xi_pow(xi, tm.bs);
      if (w == cplx(0.0, 0.0)) continue;
      acc += w * lowers_[static_cast<std::size_t>(tm.lower)]->mode_value(slot, t, tm.bt + deriv);
    }
    return acc;
  }

 private:
  std::vector<CascadeTerm> terms_;
  std::vector<std::shared_ptr<const SpectralSolution>> lowers_;
  BoxGrid grid_;
};

void leading_data(const OperatorSeries& ops, double& rho_bar, HomogenizedPoly& a2,
                  double& abar) {
  const HomogenizedPoly& p2 = ops.at(2);
  rho_bar = p2.coeff(MultiIndex(ops.dim, 2, 0));
  if (!(rho_bar > 0.0)) throw DegenerateA2("degree-2 operator carries no positive mass");
  a2 = p2.space_part();
  abar = evaluate_symbol_1d(a2, 0.0, 1.0);
  if (!(abar > 0.0)) throw DegenerateA2("leading spatial symbol is not positive");
}

}  // namespace

const SpectralSolution& ClassicalExpansion::level(int j) const {
  if (j < 0 || j >= static_cast<int>(levels.size())) throw BadInput("cascade level out of range");
  return levels[static_cast<std::size_t>(j)];
}

ClassicalExpansion solve_hierarchy(const OperatorSeries& ops, int k, const SourceTerm& f,
                                   double box_length, int n_modes, double horizon,
                                   double dt) {
  if (ops.dim != 1) throw BadInput("cascade solver handles one-dimensional media only");
  if (k < 0) throw BadInput("cascade depth must be >= 0");
  for (int m = 1; m <= k + 1; ++m) {
    if (!ops.has(2 * m))
      throw TableTooShallow("cascade depth " + std::to_string(k) + " needs operators through degree " +
                            std::to_string(2 * k + 2));
  }
  double rho_bar = 0.0, abar = 0.0;
  HomogenizedPoly a2;
  leading_data(ops, rho_bar, a2, abar);

  BoxGrid grid{box_length, n_modes};
  grid.validate();
  if (!(dt > 0.0 && dt <= 1.0)) throw BadInput("phase-1 step dt out of range");
  const double c0 = std::sqrt(abar / rho_bar);
  const double reach = std::abs(f.profile.center) + 8.5 * f.profile.width + c0 * horizon;
  if (reach > 0.5 * box_length) {
    std::ostringstream msg;
    msg << "box of length " << box_length << " wraps before t = " << horizon << " (speed " << c0
        << " needs length >= " << 2.0 * reach << ")";
    throw BoxTooSmall(msg.str());
  }

  const int stride = 8;
  int n_steps = static_cast<int>(std::ceil(1.0 / dt - 1e-12));
  n_steps = ((n_steps + stride - 1) / stride) * stride;
  const double h = 1.0 / n_steps;

  std::vector<std::vector<CascadeTerm>> terms(static_cast<std::size_t>(k) + 1);
  for (int j = 1; j <= k; ++j) terms[static_cast<std::size_t>(j)] = level_terms(ops, j);

  const std::size_t nslots = static_cast<std::size_t>(n_modes);
  std::vector<SpectralSolutionData> data(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    auto& d = data[static_cast<std::size_t>(j)];
    d.grid = grid;
    d.rho_bar = rho_bar;
    d.t_off = 1.0;
    d.dt = h;
    d.checkpoint_stride = stride;
    d.mu.assign(nslots, 0.0);
    d.active.assign(nslots, 0);
    d.checkpoints.assign(nslots, {});
    d.post.assign(nslots, PolyExp{});
    // Deeper levels feed time derivatives upward, so lower levels must
    // expose correspondingly more of their derivative tower.
    d.max_deriv = 2 * k + 6 + (k - j) * (2 * k + 2);
  }

  // Modes whose forcing amplitude is below 1e-30 of the peak contribute
  // nothing at the tolerances used anywhere downstream; skip them.  The
  // spectrum of a dipole profile peaks near 1/width instead of 0.
  const double f_peak = std::max(std::abs(f.profile.fourier(0.0)),
                                 std::abs(f.profile.fourier(1.0 / f.profile.width))) /
                        box_length;
  for (std::size_t s = 0; s < nslots; ++s) {
    const double xi = grid.xi(static_cast<int>(s));
    const double mu = evaluate_symbol_1d(a2, 0.0, xi);
    const cplx f0 = f.profile.fourier(xi) / box_length;
    const bool act = std::abs(f0) > 1e-30 * f_peak;
    for (int j = 0; j <= k; ++j) {
      data[static_cast<std::size_t>(j)].mu[s] = mu;
      data[static_cast<std::size_t>(j)].active[s] = act ? 1 : 0;
    }
    if (!act) continue;

    std::vector<OscState> states(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j)
      data[static_cast<std::size_t>(j)].checkpoints[s].push_back(states[static_cast<std::size_t>(j)]);

    // In-step evaluation of any level at any interior node, recursing
    // through partial steps of the lower levels; everything references the
    // shared `states` at the current step start t0.
    double t0 = 0.0;
    std::function<cplx(int, double, int)> val, srcv;
    srcv = [&](int lvl, double tau, int d) -> cplx {
      if (lvl == 0) return f0 * f.pulse.derivative(d, tau);
      cplx acc(0.0, 0.0);
      for (const auto& tm : terms[static_cast<std::size_t>(lvl)]) {
        const cplx w = -tm.c * i_xi_pow(xi, tm.bs);
        if (w != cplx(0.0, 0.0)) acc += w * val(tm.lower, tau, tm.bt + d);
      }
      return acc;
    };
    val = [&](int lvl, double tau, int d) -> cplx {
      if (d >= 2) return (srcv(lvl, tau, d - 2) - mu * val(lvl, tau, d - 2)) / rho_bar;
      OscState st = states[static_cast<std::size_t>(lvl)];
      if (tau > t0)
        st = exp_step(rho_bar, mu, st, t0, tau - t0,
                      [&](double u) { return srcv(lvl, u, 0); });
      return d == 0 ? st.v : st.vt;
    };

    for (int i = 0; i < n_steps; ++i) {
      t0 = i * h;
      std::vector<OscState> next(states.size());
      for (int j = 0; j <= k; ++j) {
        next[static_cast<std::size_t>(j)] =
            exp_step(rho_bar, mu, states[static_cast<std::size_t>(j)], t0, h,
                     [&](double u) { return srcv(j, u, 0); });
      }
      states = std::move(next);
      if ((i + 1) % stride == 0) {
        for (int j = 0; j <= k; ++j)
          data[static_cast<std::size_t>(j)].checkpoints[s].push_back(
              states[static_cast<std::size_t>(j)]);
      }
    }

    // Closed exponential forms for t >= 1, level by level: the forcing of
    // level j is a polynomial-exponential in the lower posts, so one exact
    // particular solution plus a state-matching homogeneous part closes it.
    std::vector<PolyExp> posts(static_cast<std::size_t>(k) + 1);
    posts[0] = homogeneous_from_state(rho_bar, mu, states[0], 1.0);
    for (int j = 1; j <= k; ++j) {
      PolyExp S;
      S.t0 = 1.0;
      for (const auto& tm : terms[static_cast<std::size_t>(j)]) {
        const cplx w = -tm.c * i_xi_pow(xi, tm.bs);
        if (w == cplx(0.0, 0.0)) continue;
        PolyExp dp = posts[static_cast<std::size_t>(tm.lower)];
        for (int b = 0; b < tm.bt; ++b) dp = dp.derivative();
        dp *= w;
        S += dp;
      }
      PolyExp P;
      P.t0 = 1.0;
      for (const auto& term : S.terms) {
        PolyExpTerm q = particular_solution(rho_bar, mu, term);
        P.add(q.lambda, q.coeff);
      }
      const cplx pv = P.eval(1.0);
      const cplx pvt = P.derivative().eval(1.0);
      OscState rest{states[static_cast<std::size_t>(j)].v - pv,
                    states[static_cast<std::size_t>(j)].vt - pvt};
      P += homogeneous_from_state(rho_bar, mu, rest, 1.0);
      posts[static_cast<std::size_t>(j)] = P;
    }
    for (int j = 0; j <= k; ++j)
      data[static_cast<std::size_t>(j)].post[s] = posts[static_cast<std::size_t>(j)];
  }

  ClassicalExpansion ex;
  ex.k = k;
  ex.rho_bar = rho_bar;
  std::vector<std::shared_ptr<const SpectralSolution>> built;
  for (int j = 0; j <= k; ++j) {
    auto& d = data[static_cast<std::size_t>(j)];
    if (j == 0)
      d.source = std::make_shared<Level0Source>(f, grid);
    else
      d.source = std::make_shared<CascadeSource>(terms[static_cast<std::size_t>(j)], built, grid);
    auto sol = std::make_shared<SpectralSolution>(std::move(d));
    built.push_back(sol);
    ex.levels.push_back(*sol);
  }
  return ex;
}

double hierarchy_defect(const ClassicalExpansion& ex, const OperatorSeries& ops, int j,
                        double t) {
  if (j < 0 || j > ex.k) throw BadInput("cascade level out of range");
  double rho_bar = 0.0, abar = 0.0;
  HomogenizedPoly a2;
  leading_data(ops, rho_bar, a2, abar);
  const auto& uj = ex.level(j);
  const auto& grid = uj.grid();
  auto terms = level_terms(ops, j);
  double num = 0.0, den = 0.0;
  for (int s = 0; s < grid.n; ++s) {
    if (!uj.active(s)) continue;
    const double xi = grid.xi(s);
    const double mu = evaluate_symbol_1d(a2, 0.0, xi);
    const cplx vtt = uj.mode_value(s, t, 2);
    const cplx v = uj.mode_value(s, t, 0);
    cplx res = rho_bar * vtt + mu * v;
    double scale = std::abs(rho_bar * vtt) + std::abs(mu * v);
    for (const auto& tm : terms) {
      const cplx w = -tm.c * i_xi_pow(xi, tm.bs);
      if (w == cplx(0.0, 0.0)) continue;
      const cplx contrib = w * ex.level(tm.lower).mode_value(s, t, tm.bt);
      res -= contrib;
      scale += std::abs(contrib);
    }
    if (j == 0 && uj.source()) {
      const cplx fS = uj.source()->eval(s, t, 0);
      res -= fS;
      scale += std::abs(fS);
    }
    num += std::norm(res);
    den += scale * scale;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double measure_secular_growth(const ClassicalExpansion& ex, const MultiIndex& beta,
                              double t1, double t2, int n_samples, double* slope_stderr,
                              double* r2, int level) {
  if (!(t1 >= 2.0 && t2 >= 4.0 * t1))
    throw WindowTooShort("growth window needs t2 >= 4 t1 and t1 >= 2");
  if (n_samples < 3) throw BadInput("growth fit needs at least three samples");
  const auto& top = ex.level(level < 0 ? ex.k : level);
  std::vector<double> ts(static_cast<std::size_t>(n_samples));
  std::vector<double> ys(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double th = t1 * std::pow(t2 / t1, static_cast<double>(i) / (n_samples - 1));
    ts[static_cast<std::size_t>(i)] = th;
    ys[static_cast<std::size_t>(i)] = std::max(top.norm_l2(beta, th), 1e-300);
  }
  PowerLawFit fit = fit_power_law(ts, ys);
  if (slope_stderr) *slope_stderr = fit.stderr_slope;
  if (r2) *r2 = fit.r2;
  return fit.slope;
}

std::vector<double> DAlembertSplit::g_deriv(int n, double t, int N) const {
  std::vector<cplx> coeff(ghat.size());
  for (std::size_t s = 0; s < ghat.size(); ++s) {
    const double xi = grid.xi(static_cast<int>(s));
    coeff[s] = ghat[s] * i_xi_pow(xi, n) * std::polar(1.0, -c * xi * t);
  }
  return synthesize_slots(grid, coeff, N);
}

std::vector<double> DAlembertSplit::h_deriv(int n, double t, int N) const {
  std::vector<cplx> coeff(hhat.size());
  for (std::size_t s = 0; s < hhat.size(); ++s) {
    const double xi = grid.xi(static_cast<int>(s));
    coeff[s] = hhat[s] * i_xi_pow(xi, n) * std::polar(1.0, c * xi * t);
  }
  return synthesize_slots(grid, coeff, N);
}

DAlembertSplit split_dalembert(const SpectralSolution& u0, double rho_bar, double a2_floor,
                               double t_star) {
  if (t_star < u0.t_off()) throw BadInput("characteristic split needs the source off");
  if (!(rho_bar > 0.0 && a2_floor > 0.0)) throw DegenerateA2("invalid leading data");
  DAlembertSplit sp;
  sp.grid = u0.grid();
  sp.c = std::sqrt(a2_floor / rho_bar);
  const std::size_t n = static_cast<std::size_t>(sp.grid.n);
  sp.ghat.assign(n, cplx(0.0, 0.0));
  sp.hhat.assign(n, cplx(0.0, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    if (!u0.active(static_cast<int>(s))) continue;
    const double xi = sp.grid.xi(static_cast<int>(s));
    const cplx v = u0.mode_value(static_cast<int>(s), t_star, 0);
    const cplx vt = u0.mode_value(static_cast<int>(s), t_star, 1);
    if (xi == 0.0) {
      sp.ghat[s] = 0.5 * v;
      sp.hhat[s] = 0.5 * v;
      continue;
    }
    const cplx icxi(0.0, sp.c * xi);
    sp.ghat[s] = 0.5 * (v - vt / icxi) * std::polar(1.0, sp.c * xi * t_star);
    sp.hhat[s] = 0.5 * (v + vt / icxi) * std::polar(1.0, -sp.c * xi * t_star);
  }
  return sp;
}

std::vector<double> secular_principal(const DAlembertSplit& split, const OperatorSeries& ops,
                                      double rho_bar, double t, int N) {
  const double c = split.c;
  const double gamma = substitute(ops.at(4), -c, 1.0);
  const double pref = gamma / (4.0 * rho_bar * c * c);
  std::vector<double> g3 = split.g_deriv(3, t, N);
  std::vector<double> h3 = split.h_deriv(3, t, N);
  const double L = split.grid.length;
  std::vector<double> z(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double x = -0.5 * L + L * static_cast<double>(i) / N;
    z[static_cast<std::size_t>(i)] = pref * ((c * t + x) * g3[static_cast<std::size_t>(i)] -
                                             (c * t - x) * h3[static_cast<std::size_t>(i)]);
  }
  return z;
}

}  // namespace longwave
