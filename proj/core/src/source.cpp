#include "longwave/source.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace longwave {

namespace {

// Coefficients of 4^m t^m (1-t)^m, ascending powers t^m .. t^{2m}.
std::vector<double> pulse_poly_coeffs(int m) {
  std::vector<double> c(static_cast<std::size_t>(m) + 1);
  double binom = 1.0;
  double scale = std::pow(4.0, m);
  for (int i = 0; i <= m; ++i) {
    c[static_cast<std::size_t>(i)] = scale * binom * (i % 2 == 0 ? 1.0 : -1.0);
    binom = binom * (m - i) / (i + 1.0);
  }
  return c;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

double TimePulse::derivative(int order, double t) const {
  if (order < 0) throw BadInput("negative derivative order");
  if (t <= 0.0 || t >= 1.0) return 0.0;
  if (kind == Kind::Polynomial) {
    // p(t) = sum_i c_i t^{m+i}; differentiate term by term.
    auto c = pulse_poly_coeffs(m);
    double v = 0.0;
    for (int i = 0; i <= m; ++i) {
      int p = m + i;
      if (p < order) continue;
      double factor = 1.0;
      for (int j = 0; j < order; ++j) factor *= p - j;
      v += c[static_cast<std::size_t>(i)] * factor * std::pow(t, p - order);
    }
    return v;
  }
  // Gaussian bump: d^n/dt^n e^{-z^2/2} = (-1)^n He_n(z) e^{-z^2/2} / sigma^n
  // with z = (t - center)/sigma and He the probabilists' Hermite polynomials.
  double z = (t - center) / sigma;
  double he0 = 1.0, he1 = z;
  double he = order == 0 ? he0 : he1;
  for (int k = 2; k <= order; ++k) {
    double next = z * he1 - (k - 1) * he0;
    he0 = he1;
    he1 = next;
    he = next;
  }
  if (order == 0) he = he0;
  double sign = order % 2 == 0 ? 1.0 : -1.0;
  return sign * he * std::exp(-0.5 * z * z) / std::pow(sigma, order);
}

int TimePulse::smooth_orders() const {
  return kind == Kind::Polynomial ? m - 1 : 64;
}

std::string TimePulse::str() const {
  std::ostringstream os;
  if (kind == Kind::Polynomial)
    os << "poly_pulse(m=" << m << ")";
  else
    os << "gauss_pulse(sigma=" << sigma << ",center=" << center << ")";
  return os.str();
}

double SpatialGaussian::value(double x) const {
  double z = (x - center) / width;
  double g = amplitude * std::exp(-0.5 * z * z);
  return moment == 1 ? -z * g : g;
}

cplx SpatialGaussian::fourier(double xi) const {
  double mag = amplitude * width * std::sqrt(2.0 * std::numbers::pi) *
               std::exp(-0.5 * width * width * xi * xi);
  cplx base = mag * std::polar(1.0, -xi * center);
  // d/dx in physical space is a factor i xi, and the 1/width from the chain
  // rule keeps the peak amplitude O(amplitude).
  return moment == 1 ? cplx(0.0, xi * width) * base : base;
}

double SpatialGaussian::support_radius() const {
  // |f| drops below ~1e-300 beyond 37 widths; use a round practical cutoff.
  return 38.0 * width;
}

std::string SpatialGaussian::str() const {
  std::ostringstream os;
  os << (moment == 1 ? "dipole" : "gaussian") << "(width=" << width << ",center=" << center
     << ",amplitude=" << amplitude << ")";
  return os.str();
}

std::string SourceTerm::str() const { return pulse.str() + " x " + profile.str(); }

SourceTerm make_source(const std::string& descriptor) {
  auto colon = descriptor.find(':');
  std::string kind = descriptor.substr(0, colon);
  auto v = split_numbers(colon == std::string::npos ? "" : descriptor.substr(colon + 1));
  SourceTerm s;
  if (kind == "poly_pulse") {
    if (v.size() < 2) throw BadConfig("poly_pulse needs m,width[,amplitude[,center]]");
    s.pulse.kind = TimePulse::Kind::Polynomial;
    s.pulse.m = static_cast<int>(v[0]);
    if (s.pulse.m < 1) throw BadConfig("poly_pulse exponent must be >= 1");
  } else if (kind == "gauss_pulse" || kind == "dipole_pulse") {
    if (v.size() < 2) throw BadConfig(kind + " needs sigma,width[,amplitude[,center]]");
    s.pulse.kind = TimePulse::Kind::GaussianBump;
    s.pulse.sigma = v[0];
    if (kind == "dipole_pulse") s.profile.moment = 1;
  } else {
    throw BadConfig("unknown source descriptor: " + descriptor +
                    " (polynomially growing or non-compactly-supported sources are out of scope)");
  }
  s.profile.width = v[1];
  if (v.size() > 2) s.profile.amplitude = v[2];
  if (v.size() > 3) s.profile.center = v[3];
  if (s.profile.width <= 0.0) throw BadConfig("source width must be positive");
  return s;
}

}  // namespace longwave
