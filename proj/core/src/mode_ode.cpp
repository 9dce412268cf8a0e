#include "longwave/mode_ode.hpp"

#include <algorithm>
#include <cmath>

namespace longwave {

double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

OscState rotate(double rho, double mu, const OscState& s, double h) {
  double w2 = mu / rho;
  double w = std::sqrt(std::max(0.0, w2));
  double z = w * h;
  double c = std::cos(z);
  double s_over_w = h * sinc(z);      // sin(w h)/w, finite at w = 0
  double w_sin = w2 * h * sinc(z);    // w sin(w h)
  OscState out;
  out.v = s.v * c + s.vt * s_over_w;
  out.vt = -s.v * w_sin + s.vt * c;
  return out;
}

OscState exp_step(double rho, double mu, const OscState& s, double t, double h,
                  const std::function<cplx(double)>& S) {
  OscState out = rotate(rho, mu, s, h);
  // Duhamel increment: int_0^h K(h - tau) S(t + tau) dtau with
  // K_v = sin(w (h - tau)) / (rho w), K_vt = cos(w (h - tau)) / rho.
  static const double kGaussOffset = 0.5 / std::sqrt(3.0);
  double w2 = mu / rho;
  double w = std::sqrt(std::max(0.0, w2));
  double nodes[2] = {h * (0.5 - kGaussOffset), h * (0.5 + kGaussOffset)};
  double weight = 0.5 * h;
  for (double tau : nodes) {
    cplx src = S(t + tau);
    double rem = h - tau;
    double z = w * rem;
    out.v += weight * src * (rem * sinc(z) / rho);
    out.vt += weight * src * (std::cos(z) / rho);
  }
  return out;
}

cplx PolyExpTerm::eval_shifted(double tau) const {
  cplx p(0.0, 0.0);
  for (std::size_t i = coeff.size(); i-- > 0;) p = p * tau + coeff[i];
  return p * std::exp(lambda * tau);
}

PolyExpTerm PolyExpTerm::derivative() const {
  PolyExpTerm d;
  d.lambda = lambda;
  std::size_t n = coeff.size();
  d.coeff.assign(std::max<std::size_t>(n, 1), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    d.coeff[i] += lambda * coeff[i];
    if (i + 1 < n) d.coeff[i] += static_cast<double>(i + 1) * coeff[i + 1];
  }
  while (d.coeff.size() > 1 && d.coeff.back() == cplx(0.0, 0.0)) d.coeff.pop_back();
  return d;
}

cplx PolyExp::eval(double t) const {
  cplx v(0.0, 0.0);
  double tau = t - t0;
  for (const auto& term : terms) v += term.eval_shifted(tau);
  return v;
}

PolyExp PolyExp::derivative() const {
  PolyExp d;
  d.t0 = t0;
  d.terms.reserve(terms.size());
  for (const auto& term : terms) d.terms.push_back(term.derivative());
  return d;
}

void PolyExp::add(cplx lambda, std::vector<cplx> coeff) {
  for (auto& term : terms) {
    if (term.lambda == lambda) {
      if (coeff.size() > term.coeff.size()) term.coeff.resize(coeff.size(), cplx(0.0, 0.0));
      for (std::size_t i = 0; i < coeff.size(); ++i) term.coeff[i] += coeff[i];
      return;
    }
  }
  PolyExpTerm t;
  t.lambda = lambda;
  t.coeff = std::move(coeff);
  terms.push_back(std::move(t));
}

PolyExp& PolyExp::operator*=(cplx s) {
  for (auto& term : terms)
    for (auto& c : term.coeff) c *= s;
  return *this;
}

PolyExp& PolyExp::operator+=(const PolyExp& o) {
  if (terms.empty()) t0 = o.t0;
  if (o.t0 != t0 && !o.terms.empty())
    throw BadInput("adding polynomial-exponential sums with different origins");
  for (const auto& term : o.terms) add(term.lambda, term.coeff);
  return *this;
}

int PolyExp::max_degree() const {
  int d = 0;
  for (const auto& term : terms) d = std::max(d, static_cast<int>(term.coeff.size()) - 1);
  return d;
}

ForcingMode classify_forcing(double rho, double mu, cplx lambda) {
  cplx c0 = rho * lambda * lambda + mu;
  double scale = rho * std::norm(lambda) + std::abs(mu);
  if (scale == 0.0) return ForcingMode::DoubleRoot;
  if (std::abs(c0) <= 1e-8 * scale)
    return std::abs(lambda) == 0.0 ? ForcingMode::DoubleRoot : ForcingMode::Resonant;
  return ForcingMode::NonResonant;
}

PolyExpTerm particular_solution(double rho, double mu, const PolyExpTerm& forcing) {
  const auto& p = forcing.coeff;
  int n = static_cast<int>(p.size()) - 1;
  cplx lambda = forcing.lambda;
  cplx c0 = rho * lambda * lambda + mu;
  cplx c1 = 2.0 * rho * lambda;
  ForcingMode mode = classify_forcing(rho, mu, lambda);
  PolyExpTerm q;
  q.lambda = lambda;
  auto at = [](const std::vector<cplx>& v, int i) {
    return (i >= 0 && i < static_cast<int>(v.size())) ? v[static_cast<std::size_t>(i)]
                                                      : cplx(0.0, 0.0);
  };
  switch (mode) {
    case ForcingMode::NonResonant: {
      q.coeff.assign(static_cast<std::size_t>(n) + 1, cplx(0.0, 0.0));
      for (int j = n; j >= 0; --j) {
        cplx rhs = at(p, j) - c1 * static_cast<double>(j + 1) * at(q.coeff, j + 1) -
                   rho * static_cast<double>((j + 1) * (j + 2)) * at(q.coeff, j + 2);
        q.coeff[static_cast<std::size_t>(j)] = rhs / c0;
      }
      break;
    }
    case ForcingMode::Resonant: {
      // c0 treated as exactly zero; q has zero constant term.
      q.coeff.assign(static_cast<std::size_t>(n) + 2, cplx(0.0, 0.0));
      for (int j = n; j >= 0; --j) {
        cplx rhs = at(p, j) - rho * static_cast<double>((j + 1) * (j + 2)) * at(q.coeff, j + 2);
        q.coeff[static_cast<std::size_t>(j) + 1] = rhs / (c1 * static_cast<double>(j + 1));
      }
      break;
    }
    case ForcingMode::DoubleRoot: {
      q.coeff.assign(static_cast<std::size_t>(n) + 3, cplx(0.0, 0.0));
      for (int j = n; j >= 0; --j)
        q.coeff[static_cast<std::size_t>(j) + 2] =
            at(p, j) / (rho * static_cast<double>((j + 1) * (j + 2)));
      break;
    }
  }
  return q;
}

PolyExp homogeneous_from_state(double rho, double mu, const OscState& s, double t0) {
  PolyExp out;
  out.t0 = t0;
  double w2 = mu / rho;
  if (w2 <= 0.0) {
    out.add(cplx(0.0, 0.0), {s.v, s.vt});
    return out;
  }
  double w = std::sqrt(w2);
  cplx iw(0.0, w);
  cplx a = 0.5 * (s.v + s.vt / iw);
  cplx b = 0.5 * (s.v - s.vt / iw);
  out.add(iw, {a});
  out.add(-iw, {b});
  return out;
}

}  // namespace longwave
