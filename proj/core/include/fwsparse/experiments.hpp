#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fwsparse/dictionary.hpp"
#include "fwsparse/synth.hpp"

namespace fwsparse::experiments {

// Shared configuration for the experiment commands. Defaults are the desk
// scale: small enough for CI, large enough that the qualitative claims
// (bound domination, slope ordering) show the same shape as a full-size
// run.
struct ExperimentConfig {
  Eigen::Index d = 500;
  Eigen::Index n = 1000;
  int trials = 50;
  Eigen::Index max_iters = 300;
  std::uint64_t base_seed = 1;

  // Sparsity rules, as multiples of each trial dictionary's own largest
  // recoverable sparsity: the sweep list drives the sparsity experiment,
  // the single multiplier drives the audit.
  std::vector<double> m_multipliers = {1.0, 2.0, 5.0, 20.0};
  double m_multiplier = 1.0;

  // Ball radius rules: multiplier on the instance's coefficient l1 norm,
  // or an absolute radius overriding it. The pair feeds the radius-
  // comparison experiment.
  double beta_multiplier = 8.0;
  std::optional<double> beta_absolute;
  std::pair<double, double> beta_pair = {1.1, 8.0};

  std::filesystem::path out_dir = ".";
  int jobs = 1;

  void validate() const;  // ConfigError
};

// Aggregated log-residual curves, one entry per iterate 0..max_iters. The
// bound entry is the pointwise maximum of the per-trial bound lines
// log||y_t|| + (k/2) log(1 - theta_t): the only aggregation that dominates
// every trial, which is what the figure claims. live_len counts the
// leading iterates where at least one trial is still above its own
// clipping floor; beyond it every curve is flat at the floor.
struct AggregateCurve {
  std::vector<double> mean_log_r;
  std::vector<double> max_log_r;
  std::vector<double> bound_log_r;
  Eigen::Index live_len = 0;
};

// Per-trial facts recorded into the metadata JSON.
struct TrialInfo {
  std::uint64_t dict_seed = 0;
  std::uint64_t signal_seed = 0;
  double coherence = 0.0;
  Eigen::Index m_star = 0;
  Eigen::Index m = 0;
};

// Test hook: supplies the dictionary and instance for one trial in place
// of seeded Gaussian generation.
using TrialSource =
    std::function<std::pair<Dictionary, SparseInstance>(int trial)>;

// Convergence experiment: `trials` Frank-Wolfe runs at m = m_star of each
// trial's own dictionary, beta = beta_multiplier * ||x*||_1. Writes
// curves.csv, fig1.svg, and exp1_metadata.json into cfg.out_dir.
AggregateCurve exp1_convergence(const ExperimentConfig& cfg,
                                const TrialSource& source = {});

// Sparsity sweep: one max-curve per multiplier in m_multipliers, same
// dictionary per trial across multipliers, bound line only for multiplier
// 1 (the guarantee needs m <= m_star). Multipliers whose sparsity would
// exceed n are skipped and recorded in the metadata. Writes sweep.csv,
// fig2.svg, exp2_metadata.json.
struct SweepResult {
  std::vector<double> multipliers;         // the ones actually run
  std::vector<double> skipped_multipliers;
  std::vector<AggregateCurve> curves;      // parallel to multipliers
};
SweepResult exp2_sparsity_sweep(const ExperimentConfig& cfg);

// Ball-radius comparison: the same instances solved with both entries of
// beta_pair; mean curves plus both bound lines. Writes beta_curves.csv,
// fig3.svg, exp3_metadata.json.
struct BetaRunResult {
  double beta_multiplier = 0.0;
  AggregateCurve curve;
};
struct Exp3Result {
  BetaRunResult first;
  BetaRunResult second;
};
Exp3Result exp3_beta_effect(const ExperimentConfig& cfg);

// Support-confinement audit: runs all three solvers on each instance at
// m = round(m_multiplier * m_star), counts atom selections outside the
// true support, and histograms the iterations OMP needs to reach
// 1e-10*||y||_2. Writes audit_summary.json.
struct AuditSummary {
  int trials = 0;
  bool guarantee_applies = false;  // every trial had m <= m_star
  long long off_support_fw = 0;
  long long off_support_mp = 0;
  long long off_support_omp = 0;
  std::map<Eigen::Index, int> omp_iterations_histogram;
  bool omp_all_exact_m = false;  // each trial converged in exactly m steps
  std::vector<TrialInfo> per_trial;

  long long off_support_total() const {
    return off_support_fw + off_support_mp + off_support_omp;
  }
  // The audited invariants only bind when the recovery condition holds.
  bool violation() const {
    return guarantee_applies && (off_support_total() > 0 || !omp_all_exact_m);
  }
};
AuditSummary run_recovery_audit(const ExperimentConfig& cfg);

// Least-squares slope of values[first..last) against their indices.
// RangeError unless first < last and the window has at least two points.
double fitted_slope(const std::vector<double>& values, std::size_t first,
                    std::size_t last);

}  // namespace fwsparse::experiments
