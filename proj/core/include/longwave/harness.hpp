#pragma once
// Experiment harness: run configuration, the end-to-end comparison pipelines
// (model expansions versus the fine-grid reference), long-time and breakdown
// studies, secular-growth tables, and report/manifest output.

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "longwave/coefficients.hpp"
#include "longwave/correctors.hpp"
#include "longwave/dispersive.hpp"
#include "longwave/dns.hpp"
#include "longwave/filter.hpp"
#include "longwave/hierarchy.hpp"
#include "longwave/homog_ops.hpp"
#include "longwave/metrics.hpp"
#include "longwave/normal_form.hpp"
#include "longwave/sampler.hpp"
#include "longwave/source.hpp"

namespace longwave {

/** Everything a run needs, parsed from `key=value` lines (config file plus
 *  command-line overrides).  Unknown keys are rejected.  `manifest()` dumps
 *  every knob in the same grammar, so a run is reproducible from its
 *  manifest alone. */
struct RunConfig {
  // Problem.
  std::string medium = "two_phase:1,4,0.5";
  int dim = 1;
  int cell_n = 128;
  std::string source = "poly_pulse:2,1";  // t^2(1-t)^2 pulse x Gaussian width 1
  std::vector<double> eps_list = {0.125, 0.0625, 0.03125};

  // Model orders.
  int k_classical = 1;
  int k_criminal = 2;

  // Low-pass filter of the dispersive path.
  FilterSpec filter;

  // Discretization of the model solvers.
  double box_length = 0.0;  // 0 = auto: 16 x source diameter + 2 c T
  int n_modes = 0;          // 0 = auto from box length and source bandwidth
  double dt = 1e-3;         // marching step over the pulse window
  double horizon = 10.0;    // largest evaluation time T
  std::vector<double> out_times;  // empty = {horizon}

  // Reference solver.
  int ppp = 16;             // starting points per cell period
  int max_ppp = 256;        // escalation cap
  double cfl = 0.9;
  int dns_time_order = 2;   // 2 = plain leapfrog, 4 = modified-equation update
  double dns_budget = 0.1;  // admissible discretization share of the error
  bool assert_budget = true;  // fail the run when the budget is not met

  // Growth / breakdown studies.
  double growth_t1 = 25.0;
  double growth_t2 = 400.0;
  bool saturating = false;  // medium known to attain the secular bounds
  double delta = 0.5;       // breakdown exponent: t_eps = eps^{-(2+delta)}
  int breakdown_levels = 2; // N: ansatz truncated at total order 2N

  // Assertions (NaN = not asserted by this run).
  double assert_classical_order = kUnset;
  double classical_order_tol = 0.5;
  double assert_criminal_order = kUnset;
  double criminal_order_tol = 0.5;
  double assert_criminal_slope_max = kUnset;
  double assert_classical_slope_min = kUnset;
  double crossover_time = kUnset;  // criminal below classical from here on

  // Bookkeeping.
  unsigned seed = 20260815;
  std::string out_dir;  // empty = no files written

  static constexpr double kUnset = -1e308;
  static bool set(double v) { return v > -1e307; }

  /** Apply one key=value assignment (BadConfig on unknown key/bad value). */
  void apply(const std::string& key, const std::string& value);
  /** Parse a whole file of key=value lines ('#' comments allowed). */
  static RunConfig from_file(const std::string& path);
  /** Apply "key=value" strings in order. */
  void apply_overrides(const std::vector<std::string>& kv);
  /** Sanity checks (list ordering, supported source, positive sizes). */
  void validate() const;
  /** Reloadable dump of every field. */
  std::string manifest() const;
};

/** One least-squares fit in a report. */
struct FitSummary {
  double value = 0.0;   // point estimate (order or slope)
  double ci95 = 0.0;    // half-width of the 95% interval
  double r2 = 0.0;
  int points = 0;
  bool valid = false;
  std::string note;
};

/** One pass/fail gate: pass iff lo <= value <= hi. */
struct AssertionResult {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;                // per (eps, t, method)
  std::map<std::string, FitSummary> fits;    // keyed by a stable label
  std::vector<AssertionResult> assertions;
  std::vector<std::string> notes;

  bool all_pass() const;
  void print(std::ostream& out) const;
  /** Write errors.csv, fits.csv, manifest.txt under cfg.out_dir (no-op when
   *  out_dir is empty). */
  void write(const RunConfig& cfg, const std::string& label) const;
};

/** The eps-independent model artifacts shared by every run. */
struct ModelStack {
  CellCoefficients cell;
  CorrectorTable table;
  OperatorSeries ops;
  NormalForm nf;
  double rho_bar = 0.0;
  double a_bar = 0.0;  // coefficient of xi^2 in the degree-2 symbol
  double c0 = 0.0;     // homogenized wave speed sqrt(a_bar / rho_bar)
};

/** Build medium, correctors (through max(2 k_cl, 2 k_cr) + 2), operator
 *  series, and the time-eliminated normal form for a config. */
ModelStack build_stack(const RunConfig& cfg);

/** Box side: explicit when set, else 16 x source diameter + 2 c T. */
double auto_box_length(const RunConfig& cfg, const ModelStack& stack, const SourceTerm& f);
/** Mode count: explicit when set, else the next power of two covering the
 *  source bandwidth at the 1e-30 relative amplitude cutoff. */
int auto_n_modes(const RunConfig& cfg, const SourceTerm& f, double box_length);

/** A named two-scale approximant to score against the reference. */
struct MethodSampler {
  std::string name;
  std::shared_ptr<const TwoScaleSampler> sampler;
};

/** Classical truncation at order k: pieces (profile 2j, eps^{2j}, corrector
 *  orders 2k+2-2j), matching the standard expansion including its two
 *  trailing oscillatory-only terms. */
TwoScaleSampler make_classical_sampler(const CorrectorTable& table, double eps, int k,
                                       const std::vector<std::shared_ptr<const SpectralSolution>>& levels);

/** One measured error point (one eps, one output time, one method). */
struct ComparePoint {
  double eps = 0.0;
  double t = 0.0;
  std::string method;
  double energy_error = 0.0;
  double l2_error = 0.0;
  double richardson = 0.0;   // discretization estimate for energy_error
  double ref_energy = 0.0;   // reference energy norm at this time
  double ref_l2 = 0.0;
  int ppp = 0;
  bool budget_ok = false;
};

/** Score several approximants against one reference run, refining the grid
 *  (ppp doubling, capped) until the Richardson estimate of the reference
 *  discretization error is within `budget` of each measured energy error. */
std::vector<ComparePoint> measure_methods(const CellCoefficients& cell, double eps,
                                          const SourceTerm& f, double box_length,
                                          const std::vector<double>& out_times,
                                          const std::vector<MethodSampler>& methods,
                                          int ppp0, int max_ppp, double budget, double cfl,
                                          int time_order = 2);

/** Fixed-time eps-sweep: classical and dispersive approximants against the
 *  reference; fits error orders in eps at each output time. */
ErrorReport run_compare(const RunConfig& cfg);

/** Single-eps long-window sweep: error growth in t for both approximants,
 *  their crossover, and the leading-term-only bound check. */
ErrorReport run_longtime(const RunConfig& cfg);

/** Secular-growth slopes of || d_x (profile 2j)(t) || per level. */
ErrorReport run_growth(const RunConfig& cfg);

/** Truncated-ansatz sup-norm at t_eps = eps^{-(2+delta)} across eps
 *  halvings, with the bounded dispersive contrast at the same times. */
ErrorReport run_breakdown(const RunConfig& cfg);

/** Sampled constant of the product estimate ||v c(./eps)||^2 <=
 *  C ||c||^2 sum_{|alpha|<=1} ||(eps d)^alpha v||^2 over random pairs. */
struct TwoScaleStudy {
  std::vector<double> eps;
  std::vector<double> c_half;  // max ratio over the first n_pairs samples
  std::vector<double> c_full;  // max ratio over 2 n_pairs samples
  bool pass = false;           // doubling-stable and eps-independent (20%)
};
TwoScaleStudy run_two_scale_study(const std::vector<double>& eps_list, int n_pairs,
                                  unsigned seed);

}  // namespace longwave
