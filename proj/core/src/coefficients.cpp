#include "longwave/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace longwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

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

const PeriodicField& CellCoefficients::a_entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim || j >= dim) throw BadInput("coefficient index out of range");
  return a[i][j];
}

bool CellCoefficients::is_constant(double tol) const {
  auto flat = [&](const PeriodicField& f) {
    double off = 0.0;
    for (std::size_t s = 1; s < f.data().size(); ++s) off += std::abs(f.data()[s]);
    return off <= tol * (1.0 + std::abs(f.mean()));
  };
  if (!flat(rho)) return false;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!flat(a[i][j])) return false;
  return true;
}

void CellCoefficients::validate() {
  if (dim != 1 && dim != 2) throw BadInput("medium dimension must be 1 or 2");
  double floor_rho = rho.min_on_grid(4);
  double floor_a;
  if (dim == 1) {
    floor_a = a[0][0].min_on_grid(4);
  } else {
    auto a11 = a[0][0].samples(4 * n);
    auto a22 = a[1][1].samples(4 * n);
    auto a12 = a[0][1].samples(4 * n);
    floor_a = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < a11.size(); ++i) {
      double tr = a11[i] + a22[i];
      double disc = std::hypot(a11[i] - a22[i], 2.0 * a12[i]);
      floor_a = std::min(floor_a, 0.5 * (tr - disc));
    }
  }
  floor_grid = std::min(floor_rho, floor_a);
  if (!(floor_grid > 0.0))
    throw BadInput("medium is not uniformly positive after band limiting (floor " +
                   std::to_string(floor_grid) + ")");
}

CellCoefficients make_constant(int dim, int n, double a0, double rho0) {
  CellCoefficients c;
  c.dim = dim;
  c.n = n;
  c.rho = PeriodicField::constant(dim, n, rho0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      c.a[i][j] = PeriodicField::constant(dim, n, i == j ? a0 : 0.0);
  c.description = "constant:" + std::to_string(a0) + "," + std::to_string(rho0);
  c.validate();
  return c;
}

CellCoefficients make_two_phase(int n, double a_minus, double a_plus, double theta,
                                double sharpness) {
  if (theta <= 0.0 || theta >= 1.0) throw BadInput("two_phase volume fraction must be in (0,1)");
  if (!(a_minus > 0.0 && a_plus > 0.0)) throw BadInput("two_phase stiffnesses must be positive");
  if (!(sharpness > 0.0 && sharpness <= 0.2))
    throw BadInput("two_phase interface width must be in (0, 0.2]");
  // 1/a as a Gaussian-mollified square wave: the f = 0 coefficient (the
  // reciprocal mean) is untouched by the mollifier.
  const int fine = std::max(8 * n, 1024);
  PeriodicField m(1, fine);
  const double jump = 1.0 / a_minus - 1.0 / a_plus;
  m.set_coeff(0, 0, theta / a_minus + (1.0 - theta) / a_plus);
  for (int f = 1; f < fine / 2; ++f) {
    const double moll = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sharpness *
                                 sharpness * f * f);
    if (moll < 1e-300) break;
    cplx v = jump * moll * (1.0 - std::polar(1.0, -kTwoPi * f * theta)) / cplx(0.0, kTwoPi * f);
    m.set_coeff(f, 0, v);
    m.set_coeff(-f, 0, std::conj(v));
  }

  std::vector<double> s = m.samples();
  for (double& v : s) v = 1.0 / v;
  PeriodicField a = PeriodicField::from_samples(1, fine, s).truncated(n);

  CellCoefficients c;
  c.dim = 1;
  c.n = n;
  c.rho = PeriodicField::constant(1, n, 1.0);
  c.a[0][0] = a;
  std::ostringstream d;
  d << "two_phase:" << a_minus << "," << a_plus << "," << theta;
  if (sharpness != 0.03) d << "," << sharpness;
  c.description = d.str();
  c.validate();
  return c;
}

CellCoefficients make_smooth_sine(int dim, int n, double amplitude) {
  if (std::abs(amplitude) >= 1.0) throw BadInput("smooth_sine amplitude must be < 1");
  CellCoefficients c;
  c.dim = dim;
  c.n = n;
  c.rho = PeriodicField::constant(dim, n, 1.0);
  auto fn = [amplitude, dim](double y1, double y2) {
    return dim == 1 ? 1.0 + amplitude * std::sin(kTwoPi * y1)
                    : 1.0 + amplitude * std::sin(kTwoPi * y1) * std::sin(kTwoPi * y2);
  };
  PeriodicField diag = PeriodicField::from_function(dim, n, fn);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      c.a[i][j] = (i == j) ? diag : PeriodicField::constant(dim, n, 0.0);
  c.description = "smooth_sine:" + std::to_string(amplitude);
  c.validate();
  return c;
}

CellCoefficients make_random_smooth(int dim, int n, unsigned seed) {
  CellCoefficients c;
  c.dim = dim;
  c.n = n;
  int band = std::min(3, n / 2 - 1);
  auto lognormal = [&](unsigned salt) {
    PeriodicField b = PeriodicField::random_band_limited(dim, n, band, 0.5, seed * 7919u + salt, 1.5);
    auto v = b.samples();
    for (auto& x : v) x = std::exp(x);
    return PeriodicField::from_samples(dim, n, v);
  };
  c.rho = lognormal(1);
  c.a[0][0] = lognormal(2);
  if (dim == 2) {
    c.a[1][1] = lognormal(3);
    PeriodicField off = PeriodicField::random_band_limited(dim, n, band, 0.15, seed * 7919u + 4, 1.5);
    c.a[0][1] = off;
    c.a[1][0] = off;
  }
  c.description = "random:" + std::to_string(seed);
  c.validate();
  return c;
}

CellCoefficients make_medium(const std::string& descriptor, int dim, int n) {
  auto colon = descriptor.find(':');
  std::string kind = descriptor.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (kind == "constant") {
    auto v = split_numbers(args);
    if (v.size() != 2) throw BadConfig("constant medium needs a0,rho0");
    return make_constant(dim, n, v[0], v[1]);
  }
  if (kind == "two_phase") {
    auto v = split_numbers(args);
    if (v.size() != 3 && v.size() != 4)
      throw BadConfig("two_phase medium needs a-,a+,theta[,width]");
    if (dim != 1) throw BadConfig("two_phase medium is one-dimensional");
    return v.size() == 3 ? make_two_phase(n, v[0], v[1], v[2])
                         : make_two_phase(n, v[0], v[1], v[2], v[3]);
  }
  if (kind == "smooth_sine") {
    auto v = split_numbers(args);
    if (v.size() != 1) throw BadConfig("smooth_sine medium needs an amplitude");
    return make_smooth_sine(dim, n, v[0]);
  }
  if (kind == "random") {
    auto v = split_numbers(args);
    if (v.size() != 1) throw BadConfig("random medium needs a seed");
    return make_random_smooth(dim, n, static_cast<unsigned>(v[0]));
  }
  if (kind == "file") return load_coefficients(args);
  throw BadConfig("unknown medium descriptor: " + descriptor);
}

void save_coefficients(const CellCoefficients& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw BadInput("cannot open " + path + " for writing");
  out << "longwave-coefficients v1\n";
  out << c.dim << " " << c.n << "\n";
  out << c.description << "\n";
  auto dump = [&out](const PeriodicField& f) {
    out.precision(17);
    for (const auto& v : f.data()) out << v.real() << " " << v.imag() << "\n";
  };
  dump(c.rho);
  for (int i = 0; i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j) dump(c.a[i][j]);
}

CellCoefficients load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header != "longwave-coefficients v1") throw BadInput("bad coefficient file header");
  CellCoefficients c;
  in >> c.dim >> c.n;
  in.ignore();
  std::getline(in, c.description);
  auto read = [&in, &c]() {
    PeriodicField f(c.dim, c.n);
    for (auto& v : f.data()) {
      double re, im;
      if (!(in >> re >> im)) throw BadInput("truncated coefficient file");
      v = cplx(re, im);
    }
    return f;
  };
  c.rho = read();
  for (int i = 0; i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j) c.a[i][j] = read();
  c.validate();
  return c;
}

}  // namespace longwave
