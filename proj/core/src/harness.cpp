#include "longwave/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "longwave/errors.hpp"

namespace longwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw BadConfig("bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  double x = parse_double(key, v);
  if (x != std::floor(x)) throw BadConfig("expected integer for '" + key + "': " + v);
  return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split(v, ','))
    if (!item.empty()) out.push_back(parse_double(key, item));
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ",";
    out += buf;
  }
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::apply(const std::string& key, const std::string& value) {
  const std::string k = trim(key), v = trim(value);
  if (k == "medium") medium = v;
  else if (k == "dim") dim = parse_int(k, v);
  else if (k == "cell_n") cell_n = parse_int(k, v);
  else if (k == "source") source = v;
  else if (k == "eps_list") eps_list = parse_list(k, v);
  else if (k == "k_classical") k_classical = parse_int(k, v);
  else if (k == "k_criminal") k_criminal = parse_int(k, v);
  else if (k == "alpha") filter.alpha = parse_double(k, v);
  else if (k == "psi1_inner") filter.psi1_inner = parse_double(k, v);
  else if (k == "psi1_outer") filter.psi1_outer = parse_double(k, v);
  else if (k == "psi2_inner") filter.psi2_inner = parse_double(k, v);
  else if (k == "psi2_outer") filter.psi2_outer = parse_double(k, v);
  else if (k == "box_length") box_length = parse_double(k, v);
  else if (k == "n_modes") n_modes = parse_int(k, v);
  else if (k == "dt") dt = parse_double(k, v);
  else if (k == "horizon") horizon = parse_double(k, v);
  else if (k == "out_times") out_times = parse_list(k, v);
  else if (k == "ppp") ppp = parse_int(k, v);
  else if (k == "max_ppp") max_ppp = parse_int(k, v);
  else if (k == "cfl") cfl = parse_double(k, v);
  else if (k == "dns_budget") dns_budget = parse_double(k, v);
  else if (k == "assert_budget") assert_budget = parse_int(k, v) != 0;
  else if (k == "dns_time_order") dns_time_order = parse_int(k, v);
  else if (k == "growth_t1") growth_t1 = parse_double(k, v);
  else if (k == "growth_t2") growth_t2 = parse_double(k, v);
  else if (k == "saturating") saturating = parse_int(k, v) != 0;
  else if (k == "delta") delta = parse_double(k, v);
  else if (k == "breakdown_levels") breakdown_levels = parse_int(k, v);
  else if (k == "assert_classical_order") assert_classical_order = parse_double(k, v);
  else if (k == "classical_order_tol") classical_order_tol = parse_double(k, v);
  else if (k == "assert_criminal_order") assert_criminal_order = parse_double(k, v);
  else if (k == "criminal_order_tol") criminal_order_tol = parse_double(k, v);
  else if (k == "assert_criminal_slope_max") assert_criminal_slope_max = parse_double(k, v);
  else if (k == "assert_classical_slope_min") assert_classical_slope_min = parse_double(k, v);
  else if (k == "crossover_time") crossover_time = parse_double(k, v);
  else if (k == "seed") seed = static_cast<unsigned>(parse_double(k, v));
  else if (k == "out_dir") out_dir = v;
  else throw BadConfig("unknown config key '" + k + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig(path + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.apply(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

void RunConfig::apply_overrides(const std::vector<std::string>& kv) {
  for (const std::string& item : kv) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw BadConfig("override must be key=value: " + item);
    apply(item.substr(0, eq), item.substr(eq + 1));
  }
}

void RunConfig::validate() const {
  if (dim != 1 && dim != 2) throw BadConfig("dim must be 1 or 2");
  if (cell_n < 8) throw BadConfig("cell_n must be at least 8");
  if (eps_list.empty()) throw BadConfig("eps_list must not be empty");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0)) throw BadConfig("eps values must lie in (0,1)");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw BadConfig("eps_list must be strictly decreasing");
  if (k_classical < 0 || k_criminal < 1) throw BadConfig("need k_classical >= 0, k_criminal >= 1");
  if (!(dt > 0.0 && dt <= 0.5)) throw BadConfig("dt must lie in (0, 0.5]");
  if (!(horizon > 1.0)) throw BadConfig("horizon must exceed the pulse window (t > 1)");
  if (ppp < 4 || max_ppp < ppp) throw BadConfig("need 4 <= ppp <= max_ppp");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw BadConfig("cfl must lie in (0,1]");
  if (!(dns_budget > 0.0 && dns_budget <= 1.0)) throw BadConfig("dns_budget must lie in (0,1]");
  if (dns_time_order != 2 && dns_time_order != 4)
    throw BadConfig("dns_time_order must be 2 or 4");
  if (!(delta >= 0.0 && delta <= 1.0)) throw BadConfig("delta must lie in [0,1]");
  if (breakdown_levels < 1) throw BadConfig("breakdown_levels must be >= 1");
  if (source.find("grow") != std::string::npos)
    throw BadConfig(
        "sources growing in time are out of scope: forcing must be supported in "
        "0 <= t <= 1 (use poly_pulse or gauss_pulse)");
  filter.validate();
  make_source(source);  // grammar check
  for (std::size_t i = 1; i < out_times.size(); ++i)
    if (!(out_times[i] > out_times[i - 1]))
      throw BadConfig("out_times must be strictly increasing");
  for (double t : out_times)
    if (!(t > 1.0)) throw BadConfig("out_times must be past the pulse (t > 1)");
}

std::string RunConfig::manifest() const {
  std::ostringstream out;
  out << "# run manifest (reloadable as a config file)\n";
  out << "medium = " << medium << "\n";
  out << "dim = " << dim << "\n";
  out << "cell_n = " << cell_n << "\n";
  out << "source = " << source << "\n";
  out << "eps_list = " << fmt_list(eps_list) << "\n";
  out << "k_classical = " << k_classical << "\n";
  out << "k_criminal = " << k_criminal << "\n";
  out << "alpha = " << fmt(filter.alpha) << "\n";
  out << "psi1_inner = " << fmt(filter.psi1_inner) << "\n";
  out << "psi1_outer = " << fmt(filter.psi1_outer) << "\n";
  out << "psi2_inner = " << fmt(filter.psi2_inner) << "\n";
  out << "psi2_outer = " << fmt(filter.psi2_outer) << "\n";
  out << "box_length = " << fmt(box_length) << "\n";
  out << "n_modes = " << n_modes << "\n";
  out << "dt = " << fmt(dt) << "\n";
  out << "horizon = " << fmt(horizon) << "\n";
  if (!out_times.empty()) out << "out_times = " << fmt_list(out_times) << "\n";
  out << "ppp = " << ppp << "\n";
  out << "max_ppp = " << max_ppp << "\n";
  out << "cfl = " << fmt(cfl) << "\n";
  out << "dns_budget = " << fmt(dns_budget) << "\n";
  out << "assert_budget = " << (assert_budget ? 1 : 0) << "\n";
  out << "dns_time_order = " << dns_time_order << "\n";
  out << "growth_t1 = " << fmt(growth_t1) << "\n";
  out << "growth_t2 = " << fmt(growth_t2) << "\n";
  out << "saturating = " << (saturating ? 1 : 0) << "\n";
  out << "delta = " << fmt(delta) << "\n";
  out << "breakdown_levels = " << breakdown_levels << "\n";
  if (set(assert_classical_order)) {
    out << "assert_classical_order = " << fmt(assert_classical_order) << "\n";
    out << "classical_order_tol = " << fmt(classical_order_tol) << "\n";
  }
  if (set(assert_criminal_order)) {
    out << "assert_criminal_order = " << fmt(assert_criminal_order) << "\n";
    out << "criminal_order_tol = " << fmt(criminal_order_tol) << "\n";
  }
  if (set(assert_criminal_slope_max))
    out << "assert_criminal_slope_max = " << fmt(assert_criminal_slope_max) << "\n";
  if (set(assert_classical_slope_min))
    out << "assert_classical_slope_min = " << fmt(assert_classical_slope_min) << "\n";
  if (set(crossover_time)) out << "crossover_time = " << fmt(crossover_time) << "\n";
  out << "seed = " << seed << "\n";
  if (!out_dir.empty()) out << "out_dir = " << out_dir << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Report

bool ErrorReport::all_pass() const {
  for (const AssertionResult& a : assertions)
    if (!a.pass) return false;
  return true;
}

void ErrorReport::print(std::ostream& out) const {
  for (const auto& [name, fit] : fits) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "fit  %-34s %8.4f  (ci95 %.4f, r2 %.4f, n=%d)%s%s\n",
                  name.c_str(), fit.value, fit.ci95, fit.r2, fit.points,
                  fit.note.empty() ? "" : "  ", fit.note.c_str());
    out << (fit.valid ? buf : std::string("~~ invalid ~~ ") + buf);
  }
  for (const AssertionResult& a : assertions) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %-32s value %.6g in [%.6g, %.6g]\n",
                  a.pass ? "PASS" : "FAIL", a.name.c_str(), a.value, a.lo, a.hi);
    out << buf;
  }
  for (const std::string& n : notes) out << "note: " << n << "\n";
}

void ErrorReport::write(const RunConfig& cfg, const std::string& label) const {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  const std::string base = cfg.out_dir + "/" + label;
  if (!rows.empty()) write_error_csv(base + "_errors.csv", rows);
  {
    std::ofstream out(base + "_fits.csv");
    out << "name, value, ci95, r2, points, valid, note\n";
    for (const auto& [name, fit] : fits)
      out << name << ", " << fit.value << ", " << fit.ci95 << ", " << fit.r2 << ", "
          << fit.points << ", " << (fit.valid ? 1 : 0) << ", " << fit.note << "\n";
    for (const AssertionResult& a : assertions)
      out << "assert:" << a.name << ", " << a.value << ", " << a.lo << ", " << a.hi << ", "
          << 0 << ", " << (a.pass ? 1 : 0) << ", \n";
  }
  {
    std::ofstream out(base + "_manifest.txt");
    out << cfg.manifest();
    for (const std::string& n : notes) out << "# note: " << n << "\n";
  }
}

// ---------------------------------------------------------------------------
// Stack and discretization defaults

ModelStack build_stack(const RunConfig& cfg) {
  ModelStack st;
  st.cell = make_medium(cfg.medium, cfg.dim, cfg.cell_n);
  const int order = std::max({2 * cfg.k_classical + 2, 2 * cfg.k_criminal + 2,
                              2 * cfg.breakdown_levels});
  st.table = compute_correctors(st.cell, order);
  st.ops = compute_a_star_series(st.table, st.cell, order);
  st.nf = eliminate_time_derivatives(st.ops);
  st.rho_bar = st.ops.at(2).coeff(MultiIndex(cfg.dim, 2, 0));
  HomogenizedPoly a2 = st.ops.at(2).space_part();
  st.a_bar = evaluate_symbol_1d(a2, 0.0, 1.0);
  if (!(st.rho_bar > 0.0) || !(st.a_bar > 0.0))
    throw DegenerateA2("degree-2 operator must have positive mass and stiffness");
  st.c0 = std::sqrt(st.a_bar / st.rho_bar);
  return st;
}

double auto_box_length(const RunConfig& cfg, const ModelStack& stack, const SourceTerm& f) {
  if (cfg.box_length > 0.0) return cfg.box_length;
  // Default sizing: source tail (Gaussian at 10 widths is ~1e-22 of peak)
  // plus two-sided propagation padding at a 30% margin over the homogenized
  // speed (covers dispersive group velocities for every medium used here).
  const double horizon = cfg.out_times.empty() ? cfg.horizon
                                               : std::max(cfg.horizon, cfg.out_times.back());
  return std::ceil(2.0 * (std::abs(f.profile.center) + 10.0 * f.profile.width +
                          1.3 * stack.c0 * horizon));
}

int auto_n_modes(const RunConfig& cfg, const SourceTerm& f, double box_length) {
  if (cfg.n_modes > 0) return cfg.n_modes;
  // Cover the band where the source amplitude exceeds 1e-30 of its peak.
  const double xi_cut = std::sqrt(2.0 * std::log(1e30)) / f.profile.width;
  const int needed = static_cast<int>(xi_cut * box_length / 3.14159265358979323846) + 8;
  int n = 64;
  while (n < needed && n < (1 << 17)) n <<= 1;
  return n;
}

// ---------------------------------------------------------------------------
// Samplers

TwoScaleSampler make_classical_sampler(
    const CorrectorTable& table, double eps, int k,
    const std::vector<std::shared_ptr<const SpectralSolution>>& levels) {
  std::vector<SamplerPiece> pieces;
  for (int j = 0; j <= k; ++j) {
    SamplerPiece p;
    p.profile = levels.at(static_cast<std::size_t>(j));
    p.prefactor = std::pow(eps, 2 * j);
    p.corrector_orders = 2 * k + 2 - 2 * j;
    pieces.push_back(std::move(p));
  }
  return TwoScaleSampler(table, eps, std::move(pieces));
}

namespace {

std::vector<std::shared_ptr<const SpectralSolution>> share_levels(const ClassicalExpansion& ex) {
  std::vector<std::shared_ptr<const SpectralSolution>> out;
  for (const SpectralSolution& s : ex.levels)
    out.push_back(std::make_shared<const SpectralSolution>(s));
  return out;
}

TwoScaleSampler make_dressed_sampler(const CorrectorTable& table, double eps, int orders,
                                     std::shared_ptr<const SpectralSolution> profile) {
  SamplerPiece p;
  p.profile = std::move(profile);
  p.prefactor = 1.0;
  p.corrector_orders = orders;
  return TwoScaleSampler(table, eps, {std::move(p)});
}

std::size_t snapshot_index(const DnsResult& dns, double t) {
  std::size_t best = 0;
  double gap = 1e300;
  for (std::size_t i = 0; i < dns.snapshots.size(); ++i) {
    double d = std::abs(dns.snapshots[i].t - t);
    if (d < gap) { gap = d; best = i; }
  }
  if (gap > 0.05) throw TimeNotStored("no snapshot near t = " + std::to_string(t));
  return best;
}

FitSummary make_fit(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& note = "") {
  FitSummary f;
  f.points = static_cast<int>(x.size());
  f.note = note;
  if (x.size() < 2) { f.note = "fewer than two points; no fit"; return f; }
  PowerLawFit fit = fit_power_law(x, y);
  f.value = fit.slope;
  f.r2 = fit.r2;
  // Two-sided 95% t-quantiles for the small n used here (df = n - 2).
  static const double tq[] = {12.71, 4.30, 3.18, 2.78, 2.57, 2.45, 2.36, 2.31, 2.26, 2.23};
  int df = f.points - 2;
  double q = df <= 0 ? 0.0 : (df <= 10 ? tq[df - 1] : 2.0);
  f.ci95 = q * fit.stderr_slope;
  f.valid = f.points >= 3;
  if (!f.valid && f.note.empty()) f.note = "needs >= 3 points";
  return f;
}

void push_assert(ErrorReport& rep, const std::string& name, double value, double lo,
                 double hi) {
  AssertionResult a;
  a.name = name;
  a.value = value;
  a.lo = lo;
  a.hi = hi;
  a.pass = value >= lo && value <= hi && value == value;  // NaN fails
  rep.assertions.push_back(a);
}

constexpr double kNoLo = -1e300;
constexpr double kNoHi = 1e300;

}  // namespace

// ---------------------------------------------------------------------------
// Reference comparison with resolution escalation

std::vector<ComparePoint> measure_methods(const CellCoefficients& cell, double eps,
                                          const SourceTerm& f, double box_length,
                                          const std::vector<double>& out_times,
                                          const std::vector<MethodSampler>& methods,
                                          int ppp0, int max_ppp, double budget, double cfl,
                                          int time_order) {
  int p = ppp0;
  DnsResult coarse = solve_exact(cell, eps, f, box_length, p, out_times, cfl, 0.0, time_order);
  for (;;) {
    DnsResult fine = solve_exact(cell, eps, f, box_length, 2 * p, out_times, cfl, 0.0, time_order);
    std::vector<ComparePoint> points;
    bool ok = true;
    for (const MethodSampler& m : methods) {
      for (double t : out_times) {
        SnapshotError ec = compare_snapshot(coarse, snapshot_index(coarse, t), *m.sampler);
        SnapshotError ef = compare_snapshot(fine, snapshot_index(fine, t), *m.sampler);
        ComparePoint pt;
        pt.eps = eps;
        pt.t = t;
        pt.method = m.name;
        pt.energy_error = ef.energy_error;
        pt.l2_error = ef.l2_error;
        pt.richardson = std::abs(ec.energy_error - ef.energy_error) / 3.0;
        pt.ref_energy = ef.ref_energy;
        pt.ref_l2 = ef.ref_l2;
        pt.ppp = 2 * p;
        pt.budget_ok = pt.richardson <= budget * pt.energy_error ||
                       pt.energy_error <= 1e-10 * std::max(pt.ref_energy, 1e-300);
        ok = ok && pt.budget_ok;
        points.push_back(pt);
      }
    }
    if (ok || 2 * p >= max_ppp) return points;
    coarse = std::move(fine);
    p *= 2;
  }
}

// ---------------------------------------------------------------------------
// run_compare

ErrorReport run_compare(const RunConfig& cfg) {
  cfg.validate();
  ErrorReport rep;
  const SourceTerm f = make_source(cfg.source);
  const ModelStack stack = build_stack(cfg);
  const double L = auto_box_length(cfg, stack, f);
  const int N = auto_n_modes(cfg, f, L);
  const std::vector<double> times =
      cfg.out_times.empty() ? std::vector<double>{cfg.horizon} : cfg.out_times;
  const double T = std::max(cfg.horizon, times.back());

  ClassicalExpansion ex = solve_hierarchy(stack.ops, cfg.k_classical, f, L, N, T, cfg.dt);
  double defect = 0.0;
  for (int j = 0; j <= cfg.k_classical; ++j)
    defect = std::max(defect, hierarchy_defect(ex, stack.ops, j, T));
  push_assert(rep, "hierarchy_defect", defect, 0.0, 1e-8);
  auto levels = share_levels(ex);

  const bool constant_medium = stack.cell.is_constant();
  // errors[method][time index][eps index]
  std::map<std::string, std::vector<std::vector<ComparePoint>>> bymethod;
  bool budget_all = true;
  for (double eps : cfg.eps_list) {
    auto classical = std::make_shared<const TwoScaleSampler>(
        make_classical_sampler(stack.table, eps, cfg.k_classical, levels));
    auto v0 = std::make_shared<const SpectralSolution>(solve_filtered(
        stack.nf, cfg.k_criminal, eps, cfg.filter, f, L, N, T, cfg.dt));
    auto criminal = std::make_shared<const TwoScaleSampler>(make_dressed_sampler(
        stack.table, eps, 2 * cfg.k_criminal + 2, v0));
    std::vector<MethodSampler> methods = {{"classical", classical}, {"criminal", criminal}};
    auto points = measure_methods(stack.cell, eps, f, L, times, methods, cfg.ppp,
                                  cfg.max_ppp, cfg.dns_budget, cfg.cfl, cfg.dns_time_order);
    for (const ComparePoint& pt : points) {
      rep.rows.push_back({pt.eps, pt.t, pt.method, pt.energy_error, pt.l2_error});
      budget_all = budget_all && pt.budget_ok;
      auto& grid = bymethod[pt.method];
      grid.resize(times.size());
      for (std::size_t ti = 0; ti < times.size(); ++ti)
        if (std::abs(times[ti] - pt.t) < 1e-9) grid[ti].push_back(pt);
    }
  }
  if (cfg.assert_budget) push_assert(rep, "dns_budget", budget_all ? 1.0 : 0.0, 1.0, 1.0);

  for (auto& [method, grid] : bymethod) {
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const auto& pts = grid[ti];
      if (pts.empty()) continue;
      std::vector<double> xs, ys;
      int floored = 0;
      for (const ComparePoint& pt : pts) {
        xs.push_back(pt.eps);
        ys.push_back(std::max(pt.energy_error, 1e-300));
        if (pt.energy_error <= 5.0 * pt.richardson) ++floored;
      }
      char label[128];
      std::snprintf(label, sizeof label, "%s_eps_order@t=%g", method.c_str(), times[ti]);
      // Fitting log(err) against log(eps): the slope is the observed order.
      FitSummary fit = make_fit(xs, ys);
      if (constant_medium || floored == static_cast<int>(pts.size())) {
        fit.valid = false;
        fit.note = "errors at the reference discretization floor; order undefined";
      } else if (floored > 0) {
        fit.note = "some points near the discretization floor";
      }
      rep.fits[label] = fit;
    }
  }
  if (constant_medium)
    rep.notes.push_back("constant medium: model errors sit at the reference solver's own "
                        "discretization level; fitted orders are not meaningful");

  if (RunConfig::set(cfg.assert_classical_order)) {
    char label[128];
    std::snprintf(label, sizeof label, "classical_eps_order@t=%g", times.front());
    const FitSummary& fit = rep.fits[label];
    push_assert(rep, "classical_order", fit.value,
                cfg.assert_classical_order - cfg.classical_order_tol,
                cfg.assert_classical_order + cfg.classical_order_tol);
  }
  if (RunConfig::set(cfg.assert_criminal_order)) {
    char label[128];
    std::snprintf(label, sizeof label, "criminal_eps_order@t=%g", times.front());
    const FitSummary& fit = rep.fits[label];
    push_assert(rep, "criminal_order", fit.value,
                cfg.assert_criminal_order - cfg.criminal_order_tol,
                cfg.assert_criminal_order + cfg.criminal_order_tol);
  }
  rep.write(cfg, "compare");
  return rep;
}

// ---------------------------------------------------------------------------
// run_longtime

ErrorReport run_longtime(const RunConfig& cfg) {
  cfg.validate();
  ErrorReport rep;
  const SourceTerm f = make_source(cfg.source);
  const ModelStack stack = build_stack(cfg);
  const double eps = cfg.eps_list.front();
  std::vector<double> times = cfg.out_times;
  if (times.empty()) {
    // Log-spaced sweep from t = 10 to the horizon.
    double t = 10.0;
    while (t < cfg.horizon * 0.999) {
      times.push_back(t);
      t *= 1.6;
    }
    times.push_back(cfg.horizon);
  }
  const double T = times.back();
  const double L = auto_box_length(cfg, stack, f);
  const int N = auto_n_modes(cfg, f, L);

  ClassicalExpansion ex = solve_hierarchy(stack.ops, cfg.k_classical, f, L, N, T, cfg.dt);
  auto levels = share_levels(ex);
  auto classical = std::make_shared<const TwoScaleSampler>(
      make_classical_sampler(stack.table, eps, cfg.k_classical, levels));
  auto v0 = std::make_shared<const SpectralSolution>(solve_filtered(
      stack.nf, cfg.k_criminal, eps, cfg.filter, f, L, N, T, cfg.dt));
  auto criminal = std::make_shared<const TwoScaleSampler>(make_dressed_sampler(
      stack.table, eps, 2 * cfg.k_criminal + 2, v0));
  auto leading = std::make_shared<const TwoScaleSampler>(make_dressed_sampler(
      stack.table, eps, 0, v0));
  std::vector<MethodSampler> methods = {
      {"classical", classical}, {"criminal", criminal}, {"leading", leading}};
  auto points = measure_methods(stack.cell, eps, f, L, times, methods, cfg.ppp,
                                cfg.max_ppp, cfg.dns_budget, cfg.cfl, cfg.dns_time_order);
  std::map<std::string, std::vector<ComparePoint>> by;
  for (const ComparePoint& pt : points) {
    rep.rows.push_back({pt.eps, pt.t, pt.method, pt.energy_error, pt.l2_error});
    by[pt.method].push_back(pt);
  }

  {  // dispersive-path error growth over the whole window
    std::vector<double> xs, ys;
    for (const ComparePoint& pt : by["criminal"]) {
      xs.push_back(pt.t);
      ys.push_back(std::max(pt.energy_error, 1e-300));
    }
    rep.fits["criminal_t_slope"] = make_fit(xs, ys);
    if (RunConfig::set(cfg.assert_criminal_slope_max))
      push_assert(rep, "criminal_slope", rep.fits["criminal_t_slope"].value, kNoLo,
                  cfg.assert_criminal_slope_max);
  }
  {  // classical growth, fitted before the error saturates at the norm level
    std::vector<double> xs, ys;
    for (const ComparePoint& pt : by["classical"]) {
      if (pt.energy_error <= 0.5 * pt.ref_energy) {
        xs.push_back(pt.t);
        ys.push_back(std::max(pt.energy_error, 1e-300));
      }
    }
    std::string note;
    if (xs.size() < 3) {
      xs.clear();
      ys.clear();
      for (const ComparePoint& pt : by["classical"]) {
        if (xs.size() >= 3) break;
        xs.push_back(pt.t);
        ys.push_back(std::max(pt.energy_error, 1e-300));
      }
      note = "saturated early; fitted on the first three points";
    } else {
      note = "fitted on pre-saturation points (error <= half the reference norm)";
    }
    rep.fits["classical_t_slope"] = make_fit(xs, ys, note);
    if (RunConfig::set(cfg.assert_classical_slope_min))
      push_assert(rep, "classical_slope", rep.fits["classical_t_slope"].value,
                  cfg.assert_classical_slope_min, kNoHi);
  }
  if (RunConfig::set(cfg.crossover_time)) {
    // Past the crossover time the dispersive path must beat the classical one.
    double worst = 0.0;
    int counted = 0;
    for (std::size_t i = 0; i < by["criminal"].size(); ++i) {
      const ComparePoint& cr = by["criminal"][i];
      const ComparePoint& cl = by["classical"][i];
      if (cr.t >= cfg.crossover_time) {
        worst = std::max(worst, cr.energy_error / std::max(cl.energy_error, 1e-300));
        ++counted;
      }
    }
    push_assert(rep, "crossover", counted > 0 ? worst : 2.0, 0.0, 1.0);
  }
  {  // leading-term-only bound: l2 <= C (eps + eps^{2k+1} <t>^2)
    std::vector<double> xs, ratios;
    double cmax = 0.0;
    const double p = std::pow(eps, 2 * cfg.k_criminal + 1);
    for (const ComparePoint& pt : by["leading"]) {
      const double bound = eps + p * (1.0 + pt.t * pt.t);
      const double r = pt.l2_error / bound;
      xs.push_back(pt.t);
      ratios.push_back(std::max(r, 1e-300));
      cmax = std::max(cmax, r);
    }
    FitSummary shape = make_fit(xs, ratios, "slope of (l2 error)/(eps + eps^{2k+1}<t>^2)");
    rep.fits["leading_ratio_slope"] = shape;
    FitSummary c;
    c.value = cmax;
    c.points = static_cast<int>(ratios.size());
    c.valid = c.points > 0;
    c.note = "smallest constant making the leading-term bound hold on the window";
    rep.fits["leading_C"] = c;
    push_assert(rep, "leading_bound_shape", shape.value, kNoLo, 0.25);
  }
  bool budget_all = true;
  for (const ComparePoint& pt : points) budget_all = budget_all && pt.budget_ok;
  if (cfg.assert_budget) push_assert(rep, "dns_budget", budget_all ? 1.0 : 0.0, 1.0, 1.0);
  rep.write(cfg, "longtime");
  return rep;
}

// ---------------------------------------------------------------------------
// run_growth

ErrorReport run_growth(const RunConfig& cfg) {
  cfg.validate();
  ErrorReport rep;
  const SourceTerm f = make_source(cfg.source);
  const ModelStack stack = build_stack(cfg);
  const double L = cfg.box_length > 0.0 ? cfg.box_length : 48.0;
  const int N = auto_n_modes(cfg, f, L);
  // Growth is read off per-mode closed forms; wrap-around only affects
  // physical-space comparisons, not mode-sum norms, so the propagation
  // check is run for the pulse window only.
  ClassicalExpansion ex = solve_hierarchy(stack.ops, cfg.k_classical, f, L, N, 2.0, cfg.dt);

  const MultiIndex dx(1, 0, 1);
  std::ofstream dump;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    dump.open(cfg.out_dir + "/growth_profiles.csv");
    dump << "level, t, dx_norm\n";
  }
  for (int j = 0; j <= cfg.k_classical; ++j) {
    double se = 0.0, r2 = 0.0;
    const double slope = measure_secular_growth(ex, dx, cfg.growth_t1, cfg.growth_t2, 12,
                                                &se, &r2, j);
    FitSummary fit;
    fit.value = slope;
    fit.ci95 = 2.23 * se;
    fit.r2 = r2;
    fit.points = 12;
    fit.valid = true;
    char label[64];
    std::snprintf(label, sizeof label, "growth_slope_level%d", 2 * j);
    rep.fits[label] = fit;
    char name[64];
    std::snprintf(name, sizeof name, "growth_level%d", 2 * j);
    if (j == 0) {
      push_assert(rep, name, slope, -0.1, 0.1);
    } else {
      push_assert(rep, name, slope, cfg.saturating ? j - 0.15 : kNoLo, j + 0.25);
    }
    if (dump.is_open()) {
      for (int i = 0; i < 24; ++i) {
        double t = cfg.growth_t1 *
                   std::pow(cfg.growth_t2 / cfg.growth_t1, static_cast<double>(i) / 23.0);
        dump << 2 * j << ", " << t << ", " << ex.level(j).norm_l2(dx, t) << "\n";
      }
    }
  }
  rep.write(cfg, "growth");
  return rep;
}

// ---------------------------------------------------------------------------
// run_breakdown

ErrorReport run_breakdown(const RunConfig& cfg) {
  cfg.validate();
  ErrorReport rep;
  const SourceTerm f = make_source(cfg.source);
  const ModelStack stack = build_stack(cfg);
  const int nlev = cfg.breakdown_levels;
  const double L = cfg.box_length > 0.0 ? cfg.box_length : 48.0;
  const int N = auto_n_modes(cfg, f, L);
  // The ansatz is evaluated far beyond the wrap horizon on purpose: its
  // secular terms grow per mode, and periodization does not damp them, so
  // the sup-norm table below still exhibits the growth mechanism.
  ClassicalExpansion ex = solve_hierarchy(stack.ops, nlev, f, L, N, 2.0, cfg.dt);
  auto levels = share_levels(ex);

  std::vector<double> sups;
  for (double eps : cfg.eps_list) {
    const double t_eps = std::pow(eps, -(2.0 + cfg.delta));
    std::vector<SamplerPiece> pieces;
    for (int j = 0; j <= nlev; ++j) {
      SamplerPiece p;
      p.profile = levels[static_cast<std::size_t>(j)];
      p.prefactor = std::pow(eps, 2 * j);
      p.corrector_orders = 2 * nlev - 2 * j;
      pieces.push_back(std::move(p));
    }
    TwoScaleSampler ansatz(stack.table, eps, std::move(pieces));
    int m = 4096;
    while (m < static_cast<int>(8.0 * L / eps) && m < (1 << 16)) m <<= 1;
    std::vector<double> vals = ansatz.lattice(TwoScaleSampler::Deriv::Value, t_eps, m);
    double sup = 0.0;
    for (double v : vals) sup = std::max(sup, std::abs(v));
    sups.push_back(sup);
    rep.rows.push_back({eps, t_eps, "ansatz_sup", sup, sup});
  }
  if (cfg.delta > 0.0) {
    // Strict growth across the last three halvings.
    double worst_ratio = kNoHi;
    const std::size_t nn = sups.size();
    for (std::size_t i = nn >= 4 ? nn - 4 : 0; i + 1 < nn; ++i)
      worst_ratio = std::min(worst_ratio, sups[i + 1] / std::max(sups[i], 1e-300));
    push_assert(rep, "breakdown_monotone", worst_ratio, 1.0 + 1e-9, kNoHi);
  } else {
    const double hi = *std::max_element(sups.begin(), sups.end());
    const double lo = *std::min_element(sups.begin(), sups.end());
    push_assert(rep, "control_bounded", hi / std::max(lo, 1e-300), 0.0, 4.0);
  }

  if (cfg.delta > 0.0 && cfg.k_criminal >= 1) {
    // Dispersive contrast at the same times: fit the error-law constant on a
    // short reference-checked window, extrapolate to t_eps, and compare with
    // the (conserved) reference energy norm.  The short-window errors are
    // usually dominated by the reference grid, so the fitted constant -- and
    // with it the extrapolation -- is an upper bound.
    const double eps0 = cfg.eps_list.front();
    const std::vector<double> fit_times = {4.0, 8.0, 16.0};
    const double Lc = std::ceil(2.0 * (8.5 * f.profile.width + 1.3 * stack.c0 * 16.0));
    const int Nc = auto_n_modes(cfg, f, Lc);
    auto v0 = std::make_shared<const SpectralSolution>(solve_filtered(
        stack.nf, cfg.k_criminal, eps0, cfg.filter, f, Lc, Nc, 16.0, cfg.dt));
    auto criminal = std::make_shared<const TwoScaleSampler>(make_dressed_sampler(
        stack.table, eps0, 2 * cfg.k_criminal + 2, v0));
    const int fit_ppp = std::min(4 * cfg.ppp, cfg.max_ppp);
    DnsResult dns = solve_exact(stack.cell, eps0, f, Lc, fit_ppp, fit_times, cfg.cfl, 0.0,
                                cfg.dns_time_order);
    double cfit = 0.0;
    const double p0 = std::pow(eps0, 2 * cfg.k_criminal + 1);
    for (double t : fit_times) {
      SnapshotError e = compare_snapshot(dns, snapshot_index(dns, t), *criminal);
      cfit = std::max(cfit, e.energy_error / (p0 * std::sqrt(1.0 + t * t)));
    }
    FitSummary cf;
    cf.value = cfit;
    cf.points = static_cast<int>(fit_times.size());
    cf.valid = true;
    cf.note = "upper bound (short-window errors include the reference grid error)";
    rep.fits["criminal_error_C"] = cf;

    double worst = 0.0;
    for (double eps : cfg.eps_list) {
      const double t_eps = std::pow(eps, -(2.0 + cfg.delta));
      const double extrap =
          cfit * std::pow(eps, 2 * cfg.k_criminal + 1) * std::sqrt(1.0 + t_eps * t_eps);
      // Conserved post-pulse energy norm of the reference for this eps.
      DnsResult ref = solve_exact(stack.cell, eps, f, Lc, cfg.ppp, {4.0}, cfg.cfl, 0.0,
                                  cfg.dns_time_order);
      const DnsSnapshot& snap = ref.snapshots.front();
      std::vector<double> ux = spectral_dx(snap.u, Lc);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < snap.u.size(); ++i)
        norm2 += snap.ut[i] * snap.ut[i] + ux[i] * ux[i];
      const double ref_norm = std::sqrt(norm2 * ref.dx);
      rep.rows.push_back({eps, t_eps, "criminal_extrapolated", extrap, extrap});
      worst = std::max(worst, extrap / (0.1 * ref_norm));
    }
    push_assert(rep, "criminal_small_at_t_eps", worst, 0.0, 1.0);
  }
  rep.write(cfg, "breakdown");
  return rep;
}

// ---------------------------------------------------------------------------
// Two-scale product estimate

TwoScaleStudy run_two_scale_study(const std::vector<double>& eps_list, int n_pairs,
                                  unsigned seed) {
  if (n_pairs < 8) throw BadInput("two-scale study needs at least 8 pairs");
  TwoScaleStudy study;
  study.eps = eps_list;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<unsigned> pick(0, 1u << 30);
  std::uniform_real_distribution<double> mean_dist(-1.0, 1.0);

  struct Pair {
    PeriodicField v, dv, c;
    double rhs_c = 0.0;  // ||c||^2 on the unit torus
    double v2 = 0.0, dv2 = 0.0;
  };
  const int total = 2 * n_pairs;
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    Pair p{PeriodicField::random_band_limited(1, 64, 8, 1.0, pick(rng)),
           PeriodicField{}, PeriodicField::random_band_limited(1, 128, 48, 1.0, pick(rng), 1.0)};
    // Band-limited draws are mean-free; give both factors a DC part so the
    // estimate is exercised off the zero-mean subspace too.
    p.v.set_coeff(0, 0, mean_dist(rng));
    p.c.set_coeff(0, 0, mean_dist(rng));
    p.dv = p.v.derivative(0);
    p.rhs_c = p.c.norm_l2() * p.c.norm_l2();
    p.v2 = p.v.norm_l2() * p.v.norm_l2();
    p.dv2 = p.dv.norm_l2() * p.dv.norm_l2();
    pairs.push_back(std::move(p));
  }

  const int m = 8192;  // quadrature grid on the unit box
  study.pass = true;
  for (double eps : eps_list) {
    const double inv = 1.0 / eps;
    const double periods = std::round(inv);
    if (std::abs(inv - periods) > 1e-9)
      throw BadInput("two-scale study needs 1/eps integral");
    const int tile = static_cast<int>(std::round(m * eps));
    double cmax_half = 0.0, cmax_full = 0.0;
    for (int i = 0; i < total; ++i) {
      const Pair& p = pairs[static_cast<std::size_t>(i)];
      std::vector<double> vs = p.v.samples(m);
      std::vector<double> cs = p.c.samples(tile);
      double lhs = 0.0;
      for (int g = 0; g < m; ++g) {
        const double prod = vs[static_cast<std::size_t>(g)] *
                            cs[static_cast<std::size_t>(g % tile)];
        lhs += prod * prod;
      }
      lhs /= m;
      const double rhs = p.rhs_c * (p.v2 + eps * eps * p.dv2);
      const double ratio = lhs / rhs;
      if (i < n_pairs) cmax_half = std::max(cmax_half, ratio);
      cmax_full = std::max(cmax_full, ratio);
    }
    study.c_half.push_back(cmax_half);
    study.c_full.push_back(cmax_full);
    study.pass = study.pass && std::abs(cmax_full - cmax_half) <= 0.2 * cmax_half;
  }
  const double hi = *std::max_element(study.c_full.begin(), study.c_full.end());
  const double lo = *std::min_element(study.c_full.begin(), study.c_full.end());
  study.pass = study.pass && hi <= 1.2 * lo;
  return study;
}

}  // namespace longwave
