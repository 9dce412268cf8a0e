#include "longwave/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "longwave/errors.hpp"

namespace longwave {

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw BadInput("power-law fit: size mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw BadInput("power-law fit needs at least two points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw BadInput("power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[static_cast<std::size_t>(i)];
    my += ly[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = lx[static_cast<std::size_t>(i)] - mx;
    const double dy = ly[static_cast<std::size_t>(i)] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw BadInput("power-law fit: degenerate abscissae");
  PowerLawFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[static_cast<std::size_t>(i)] - fit.intercept -
                     fit.slope * lx[static_cast<std::size_t>(i)];
    ssr += r * r;
  }
  fit.stderr_slope = (n > 2) ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  fit.r2 = (syy > 0.0) ? 1.0 - ssr / syy : 1.0;
  return fit;
}

void write_error_csv(const std::string& path, const std::vector<ErrorRow>& rows) {
  std::ofstream out(path);
  if (!out) throw BadInput("cannot open " + path + " for writing");
  out << "eps, t, method, energy_error, l2_error\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g, %.12g, %s, %.12g, %.12g\n", r.eps, r.t,
                  r.method.c_str(), r.energy_error, r.l2_error);
    out << buf;
  }
  if (!out) throw BadInput("write failure on " + path);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ErrorRow> read_error_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw BadInput(path + ": empty file");
  if (trim(line) != "eps, t, method, energy_error, l2_error")
    throw BadInput(path + ": unexpected CSV header");
  std::vector<ErrorRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string field;
    ErrorRow r;
    std::getline(ls, field, ',');
    r.eps = std::stod(trim(field));
    std::getline(ls, field, ',');
    r.t = std::stod(trim(field));
    std::getline(ls, field, ',');
    r.method = trim(field);
    std::getline(ls, field, ',');
    r.energy_error = std::stod(trim(field));
    if (!std::getline(ls, field)) throw BadInput(path + ": short row");
    r.l2_error = std::stod(trim(field));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace longwave
