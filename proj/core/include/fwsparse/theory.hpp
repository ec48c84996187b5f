#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "fwsparse/dictionary.hpp"
#include "fwsparse/pursuit.hpp"
#include "fwsparse/synth.hpp"

namespace fwsparse {

// Everything the guarantee layer can say about one solver run. Optional
// fields are absent when their defining condition fails (for example no
// contraction factor when the coefficient l1 norm exceeds the ball radius,
// no threshold quantities when the cumulative coherence reaches 1). The
// inputs that produced the derived values are recorded alongside them.
struct TheoryReport {
  // Condition m < (1/mu + 1)/2 for the instance's own sparsity m.
  bool recovery_ok = false;
  // Every recorded atom lies in the instance support (exact membership).
  bool support_confined = false;

  // Per-iteration squared-residual contraction factor; present when
  // x_star_l1 <= beta and mu1_m_minus_1 < 1. Zero at the beta boundary.
  std::optional<double> contraction_factor;
  // Smallest ball radius that guarantees contraction from iteration 0,
  // and the matching uniform bound on the iterate l1 norm (same formula,
  // distinct meanings). Present when mu1_m_minus_1 < 1.
  std::optional<double> beta_threshold;
  std::optional<double> iterate_l1_bound;
  // threshold / beta; contraction from the first iteration needs < 1.
  std::optional<double> threshold_ratio;
  // First-iteration contraction factor; present when threshold_ratio <= 1.
  std::optional<double> first_iter_rate;

  // Half the slack between the ball radius and the coefficient l1 norm;
  // positive exactly when the true coefficients are interior.
  double epsilon = 0.0;

  // Smallest K such that every above-floor ratio ||r_{k+1}||^2/||r_k||^2
  // with k >= K stays within 1 - contraction_factor + 1e-12. Absent when
  // no such K exists within the trace or the factor itself is absent.
  std::optional<Eigen::Index> rate_onset_iter;
  // Whether every above-floor ratio from k = 0 respects the
  // first-iteration rate; present only when threshold_ratio < 1.
  std::optional<bool> first_iter_ok;
  // First state index k with ||x_k - x_star||_1 <= epsilon. Reconstructed
  // from the records, so only available for Frank-Wolfe traces (the greedy
  // solvers' records do not determine their iterates). Absent when
  // epsilon <= 0 or never entered within the trace.
  std::optional<Eigen::Index> epsilon_entry_iter;

  // Inputs echoed for the JSON export.
  Algorithm algorithm = Algorithm::FrankWolfe;
  Eigen::Index m = 0;
  double beta = 0.0;
  double x_star_l1 = 0.0;
  double y_l2 = 0.0;
  double coherence = 0.0;
  double mu1_m_minus_1 = 0.0;
};

// Squared-residual contraction factor
//   (1/16) * ((1 - mu1_m_minus_1) / m) * (1 - x_star_l1 / beta)^2.
// Preconditions: m >= 1, beta > 0, 0 <= x_star_l1 <= beta (RangeError on
// m/beta/negative-norm violations). ConditionViolatedError when
// mu1_m_minus_1 >= 1 or x_star_l1 > beta. Value lies in [0, 1/16].
double contraction_factor(double mu1_m_minus_1, Eigen::Index m,
                          double x_star_l1, double beta);

// Ball radius above which contraction holds from the very first iteration:
//   2 * y_l2 * sqrt(m / (1 - mu1_m_minus_1)).
// ConditionViolatedError when mu1_m_minus_1 >= 1.
double beta_threshold(double y_l2, Eigen::Index m, double mu1_m_minus_1);

// First-iteration contraction factor
//   ((1 - mu1_m_minus_1) / (4m)) * (1 - tau)^2
// where tau is beta_threshold over beta. Accepts tau in [0,1] (zero at the
// boundary); ConditionViolatedError for tau > 1.
double first_iter_rate(double mu1_m_minus_1, Eigen::Index m, double tau);

// Uniform bound on ||x_k||_1 along the Frank-Wolfe path. Numerically equal
// to beta_threshold; kept as its own operation because it bounds a
// different quantity.
double iterate_l1_bound(double y_l2, Eigen::Index m, double mu1_m_minus_1);

// Checks one trace against every guarantee that applies to it. `metrics`
// must have been analyzed on the generating dictionary with a cumulative
// coherence profile covering the instance sparsity (m_max >= m-1); `beta`
// is the ball radius the trace was produced with. Ratios whose denominator
// residual is below 1e-13 * ||y||_2 are excluded from rate checks.
// Throws MismatchedTraceError when the trace, instance, and metrics cannot
// belong together (dimension or index disagreements, profile too short).
TheoryReport validate_trace(const SolverTrace& trace,
                            const SparseInstance& instance,
                            const DictionaryMetrics& metrics, double beta);

nlohmann::json to_json(const TheoryReport& report);
void save_report_json(const TheoryReport& report,
                      const std::filesystem::path& path);

}  // namespace fwsparse
