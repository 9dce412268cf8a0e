#pragma once

#include <string>
#include <vector>

namespace longwave {

/** Ordinary least squares on (log x, log y): y ~ C x^slope. */
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;      // in log space
  double stderr_slope = 0.0;   // 0 when n == 2
  double r2 = 1.0;
  int n = 0;
};

/** Requires matching sizes, n >= 2, strictly positive data. */
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/** One accuracy record of a model/reference comparison. */
struct ErrorRow {
  double eps = 0.0;
  double t = 0.0;
  std::string method;
  double energy_error = 0.0;
  double l2_error = 0.0;
};

/** CSV with the fixed header "eps, t, method, energy_error, l2_error". */
void write_error_csv(const std::string& path, const std::vector<ErrorRow>& rows);
std::vector<ErrorRow> read_error_csv(const std::string& path);

}  // namespace longwave
