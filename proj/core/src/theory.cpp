#include "fwsparse/theory.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fwsparse/errors.hpp"

namespace fwsparse {

namespace {

void require_unit_range(double mu1_m_minus_1) {
  if (!(mu1_m_minus_1 >= 0.0)) {
    throw RangeError("cumulative coherence must be nonnegative");
  }
  if (mu1_m_minus_1 >= 1.0) {
    throw ConditionViolatedError(
        "cumulative coherence at m-1 is " + std::to_string(mu1_m_minus_1) +
        " >= 1; the guarantee does not apply");
  }
}

void require_sparsity(Eigen::Index m) {
  if (m < 1) throw RangeError("sparsity m must be >= 1");
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json opt_json(const std::optional<Eigen::Index>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json opt_json(const std::optional<bool>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

double contraction_factor(double mu1_m_minus_1, Eigen::Index m,
                          double x_star_l1, double beta) {
  require_sparsity(m);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw RangeError("beta must be positive and finite");
  }
  if (!(x_star_l1 >= 0.0)) {
    throw RangeError("coefficient l1 norm must be nonnegative");
  }
  require_unit_range(mu1_m_minus_1);
  if (x_star_l1 > beta) {
    throw ConditionViolatedError(
        "coefficient l1 norm exceeds the ball radius; no contraction factor");
  }
  const double margin = 1.0 - x_star_l1 / beta;
  return (1.0 / 16.0) * ((1.0 - mu1_m_minus_1) / static_cast<double>(m)) *
         margin * margin;
}

double beta_threshold(double y_l2, Eigen::Index m, double mu1_m_minus_1) {
  require_sparsity(m);
  if (!(y_l2 >= 0.0)) throw RangeError("signal norm must be nonnegative");
  require_unit_range(mu1_m_minus_1);
  return 2.0 * y_l2 *
         std::sqrt(static_cast<double>(m) / (1.0 - mu1_m_minus_1));
}

double first_iter_rate(double mu1_m_minus_1, Eigen::Index m, double tau) {
  require_sparsity(m);
  require_unit_range(mu1_m_minus_1);
  if (!(tau >= 0.0)) throw RangeError("tau must be nonnegative");
  if (tau > 1.0) {
    throw ConditionViolatedError(
        "tau exceeds 1 (radius below threshold); no first-iteration rate");
  }
  const double margin = 1.0 - tau;
  return ((1.0 - mu1_m_minus_1) / (4.0 * static_cast<double>(m))) * margin *
         margin;
}

double iterate_l1_bound(double y_l2, Eigen::Index m, double mu1_m_minus_1) {
  return beta_threshold(y_l2, m, mu1_m_minus_1);
}

TheoryReport validate_trace(const SolverTrace& trace,
                            const SparseInstance& instance,
                            const DictionaryMetrics& metrics, double beta) {
  const Eigen::Index n = metrics.size();
  if (instance.coefficients.size() != n || trace.final_x.size() != n) {
    throw MismatchedTraceError(
        "coefficient lengths disagree with the metrics' atom count");
  }
  if (instance.signal.size() != metrics.dim()) {
    throw MismatchedTraceError("signal length disagrees with the metrics");
  }
  if (!instance.support.empty() && instance.support.max_index() >= n) {
    throw MismatchedTraceError("instance support indexes a larger dictionary");
  }
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const IterationRecord& rec = trace.records[i];
    if (rec.atom < 0 || rec.atom >= n) {
      throw MismatchedTraceError("trace record atom outside dictionary");
    }
    if (rec.k != static_cast<Eigen::Index>(i)) {
      throw MismatchedTraceError("trace records are not consecutive");
    }
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw RangeError("beta must be positive and finite");
  }

  TheoryReport report;
  report.algorithm = trace.algorithm;
  report.m = instance.support.size();
  report.beta = beta;
  report.x_star_l1 = instance.coeff_l1;
  report.y_l2 = instance.signal_l2;
  report.coherence = metrics.coherence();
  report.recovery_ok =
      report.m <= max_recoverable_sparsity(report.coherence, n);
  report.epsilon = 0.5 * (beta - report.x_star_l1);

  report.support_confined = true;
  for (const IterationRecord& rec : trace.records) {
    if (!instance.support.contains(rec.atom)) {
      report.support_confined = false;
      break;
    }
  }

  if (report.m >= 1) {
    if (report.m - 1 > metrics.m_max()) {
      throw MismatchedTraceError(
          "cumulative coherence profile is too short for the instance "
          "sparsity; analyze with m_max >= m-1");
    }
    const double mu1 =
        metrics.cumulative_coherence()[static_cast<std::size_t>(report.m) - 1];
    report.mu1_m_minus_1 = mu1;
    if (mu1 < 1.0) {
      report.beta_threshold = beta_threshold(report.y_l2, report.m, mu1);
      report.iterate_l1_bound = iterate_l1_bound(report.y_l2, report.m, mu1);
      const double tau = *report.beta_threshold / beta;
      report.threshold_ratio = tau;
      if (report.x_star_l1 <= beta) {
        report.contraction_factor =
            contraction_factor(mu1, report.m, report.x_star_l1, beta);
      }
      if (tau <= 1.0) {
        report.first_iter_rate = first_iter_rate(mu1, report.m, tau);
      }
    }
  }

  // Squared-residual ratios; entry k divides state k+1 by state k. The
  // final state comes from the recomputed final residual.
  std::vector<double> rs;
  rs.reserve(trace.records.size() + 1);
  for (const IterationRecord& rec : trace.records) {
    rs.push_back(rec.residual_norm);
  }
  rs.push_back(trace.final_residual_norm);
  const double floor = 1e-13 * report.y_l2;
  const auto ratio_count = static_cast<Eigen::Index>(rs.size()) - 1;
  const auto ratio_at = [&rs](Eigen::Index k) {
    const double a = rs[static_cast<std::size_t>(k) + 1];
    const double b = rs[static_cast<std::size_t>(k)];
    return (a * a) / (b * b);
  };
  const auto valid_at = [&rs, floor](Eigen::Index k) {
    return rs[static_cast<std::size_t>(k)] >= floor;
  };

  if (report.contraction_factor) {
    const double limit = 1.0 - *report.contraction_factor + 1e-12;
    Eigen::Index last_fail = -1, last_valid = -1;
    for (Eigen::Index k = 0; k < ratio_count; ++k) {
      if (!valid_at(k)) continue;
      last_valid = k;
      if (ratio_at(k) > limit) last_fail = k;
    }
    if (last_fail == -1) {
      // No observable violation anywhere; vacuously zero when the trace
      // has no above-floor ratios at all.
      report.rate_onset_iter = 0;
    } else if (last_fail < last_valid) {
      report.rate_onset_iter = last_fail + 1;
    }
    // else: the last observable ratio still violates; onset not detected.
  }

  if (report.threshold_ratio && *report.threshold_ratio < 1.0 &&
      report.first_iter_rate) {
    const double limit = 1.0 - *report.first_iter_rate + 1e-12;
    bool ok = true;
    for (Eigen::Index k = 0; k < ratio_count; ++k) {
      if (valid_at(k) && ratio_at(k) > limit) {
        ok = false;
        break;
      }
    }
    report.first_iter_ok = ok;
  }

  if (trace.algorithm == Algorithm::FrankWolfe && report.epsilon > 0.0) {
    // Replay the iterate sequence; records carry everything Frank-Wolfe
    // needs (step, vertex atom, vertex sign).
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::Index state = 0;
    std::optional<Eigen::Index> entry;
    const auto distance_ok = [&]() {
      return (x - instance.coefficients).lpNorm<1>() <= report.epsilon;
    };
    if (distance_ok()) entry = state;
    for (const IterationRecord& rec : trace.records) {
      if (entry) break;
      const double mass = rec.gamma * rec.sign * beta;
      if (rec.gamma == 1.0) {
        x.setZero();
        x(rec.atom) = mass;
      } else {
        x *= (1.0 - rec.gamma);
        x(rec.atom) += mass;
      }
      ++state;
      if (distance_ok()) entry = state;
    }
    report.epsilon_entry_iter = entry;
  }

  return report;
}

nlohmann::json to_json(const TheoryReport& report) {
  return nlohmann::json{
      {"algorithm", algorithm_name(report.algorithm)},
      {"recovery_ok", report.recovery_ok},
      {"support_confined", report.support_confined},
      {"contraction_factor", opt_json(report.contraction_factor)},
      {"beta_threshold", opt_json(report.beta_threshold)},
      {"iterate_l1_bound", opt_json(report.iterate_l1_bound)},
      {"threshold_ratio", opt_json(report.threshold_ratio)},
      {"first_iter_rate", opt_json(report.first_iter_rate)},
      {"epsilon", report.epsilon},
      {"rate_onset_iter", opt_json(report.rate_onset_iter)},
      {"first_iter_ok", opt_json(report.first_iter_ok)},
      {"epsilon_entry_iter", opt_json(report.epsilon_entry_iter)},
      {"m", report.m},
      {"beta", report.beta},
      {"x_star_l1", report.x_star_l1},
      {"y_l2", report.y_l2},
      {"coherence", report.coherence},
      {"mu1_m_minus_1", report.mu1_m_minus_1},
  };
}

void save_report_json(const TheoryReport& report,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(report).dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace fwsparse
