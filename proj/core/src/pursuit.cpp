#include "fwsparse/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fwsparse/errors.hpp"

namespace fwsparse {

namespace {

// Residuals below this are numerically zero; atom selection on them would
// amplify noise, so solvers treat the floor as an implicit tolerance.
constexpr double kSelectionFloor = 1e-14;

// Full Phi*x recomputation cadence for the incrementally updated solvers.
constexpr Eigen::Index kRecomputeEvery = 100;

AtomSelection select_from_correlations(const Eigen::VectorXd& c) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double a = std::abs(c(i));
    if (a > best_abs) {  // strict: exact ties keep the lowest index
      best_abs = a;
      best = i;
    }
  }
  return {best, c(best) >= 0.0 ? +1 : -1};
}

// Good-atom ratio from precomputed correlations; no value when the
// on-support correlations have vanished.
std::optional<double> ratio_from_correlations(const Eigen::VectorXd& c,
                                              const Support& support) {
  double on = 0.0, off = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double& slot = support.contains(i) ? on : off;
    slot = std::max(slot, std::abs(c(i)));
  }
  if (on <= 1e-14) return std::nullopt;
  return off / on;
}

void check_dimensions(const Dictionary& dict, const Eigen::VectorXd& y) {
  if (y.size() != dict.dim()) {
    throw DimensionMismatchError("signal length " + std::to_string(y.size()) +
                                 " does not match dictionary dimension " +
                                 std::to_string(dict.dim()));
  }
}

void check_rho_setup(const Dictionary& dict, const FwConfig& cfg,
                     const Support* reference_support) {
  if (cfg.record_rho) {
    if (reference_support == nullptr) {
      throw ConfigError("record_rho requires a reference support");
    }
    if (reference_support->empty()) {
      throw RangeError("reference support is empty");
    }
    if (reference_support->max_index() >= dict.size()) {
      throw RangeError("reference support index outside dictionary");
    }
  }
}

std::vector<Eigen::Index> nonzero_indices(const Eigen::VectorXd& x) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) out.push_back(i);
  }
  return out;
}

void finalize(SolverTrace& trace, const Dictionary& dict,
              const Eigen::VectorXd& y, Eigen::VectorXd x, StopReason reason) {
  trace.final_x = std::move(x);
  trace.final_residual_norm = (y - dict.matrix() * trace.final_x).norm();
  trace.stop_reason = reason;
  trace.converged = reason != StopReason::MaxIters;
  trace.active_set = nonzero_indices(trace.final_x);
}

}  // namespace

const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::FrankWolfe: return "fw";
    case Algorithm::MatchingPursuit: return "mp";
    case Algorithm::OrthogonalMatchingPursuit: return "omp";
  }
  return "unknown";
}

void FwConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be positive and finite");
  }
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (residual_tol && (!(*residual_tol >= 0.0) || !std::isfinite(*residual_tol))) {
    throw ConfigError("residual_tol must be nonnegative and finite");
  }
}

AtomSelection select_atom(const Dictionary& dict,
                          const Eigen::VectorXd& residual) {
  check_dimensions(dict, residual);
  if (residual.norm() < kSelectionFloor) {
    throw ZeroResidualError("residual is numerically zero; nothing to select");
  }
  const Eigen::VectorXd c = dict.matrix().transpose() * residual;
  return select_from_correlations(c);
}

double fw_step_size(const Dictionary& dict, const Eigen::VectorXd& x_k,
                    const SparseDirection& s_k, const Eigen::VectorXd& r_k) {
  check_dimensions(dict, r_k);
  if (x_k.size() != dict.size()) {
    throw DimensionMismatchError("iterate length does not match atom count");
  }
  if (s_k.atom < 0 || s_k.atom >= dict.size()) {
    throw RangeError("direction atom outside dictionary");
  }
  if (s_k.sign != 1 && s_k.sign != -1) {
    throw RangeError("direction sign must be +1 or -1");
  }
  const Eigen::VectorXd dir = s_k.sign * s_k.beta * dict.atom(s_k.atom) -
                              dict.matrix() * x_k;
  const double denom = dir.squaredNorm();
  if (denom < kSelectionFloor * kSelectionFloor) {
    throw DegenerateDirectionError(
        "step direction maps to a numerically zero signal movement");
  }
  return std::clamp(dir.dot(r_k) / denom, 0.0, 1.0);
}

double good_atom_ratio(const Dictionary& dict, const Support& support,
                       const Eigen::VectorXd& residual) {
  check_dimensions(dict, residual);
  if (support.empty()) throw RangeError("good_atom_ratio: empty support");
  if (support.max_index() >= dict.size()) {
    throw RangeError("support index outside dictionary");
  }
  const Eigen::VectorXd c = dict.matrix().transpose() * residual;
  const auto ratio = ratio_from_correlations(c, support);
  if (!ratio) {
    throw UndefinedRatioError(
        "residual is orthogonal to every support atom; ratio undefined");
  }
  return *ratio;
}

SolverTrace fw_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                     const FwConfig& cfg, const Support* reference_support) {
  cfg.validate();
  check_dimensions(dict, y);
  check_rho_setup(dict, cfg, reference_support);
  const Eigen::Index n = dict.size();
  const double y_norm = y.norm();
  const double tol = std::max(cfg.residual_tol.value_or(1e-10 * y_norm),
                              kSelectionFloor);

  SolverTrace trace;
  trace.algorithm = Algorithm::FrankWolfe;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd phi_x = Eigen::VectorXd::Zero(y.size());
  Eigen::VectorXd r = y;

  for (Eigen::Index k = 0; k < cfg.max_iters; ++k) {
    const double r_norm = r.norm();
    if (r_norm <= tol) {
      finalize(trace, dict, y, std::move(x), StopReason::ResidualTol);
      return trace;
    }
    const Eigen::VectorXd c = dict.matrix().transpose() * r;
    const auto [atom, sign] = select_from_correlations(c);

    const Eigen::VectorXd dir = sign * cfg.beta * dict.atom(atom) - phi_x;
    const double denom = dir.squaredNorm();
    if (denom < kSelectionFloor * kSelectionFloor) {
      // The current signal estimate coincides with the chosen vertex; no
      // movement is possible along this direction.
      finalize(trace, dict, y, std::move(x), StopReason::Stationary);
      return trace;
    }
    const double gamma = std::clamp(dir.dot(r) / denom, 0.0, 1.0);
    if (gamma == 0.0) {
      // Optimal step is no step: x is already optimal on the ball
      // (recording would duplicate the last state, so stop silently).
      finalize(trace, dict, y, std::move(x), StopReason::Stationary);
      return trace;
    }

    IterationRecord rec;
    rec.k = k;
    rec.atom = atom;
    rec.sign = sign;
    rec.gamma = gamma;
    rec.residual_norm = r_norm;
    rec.iterate_l1 = x.lpNorm<1>();
    if (cfg.record_rho) {
      rec.rho = ratio_from_correlations(c, *reference_support);
    }
    trace.records.push_back(std::move(rec));

    const double mass = gamma * sign * cfg.beta;
    if (gamma == 1.0) {
      x.setZero();  // the convex combination collapses onto the vertex
      x(atom) = mass;
      phi_x = mass * dict.atom(atom);
    } else {
      x *= (1.0 - gamma);
      x(atom) += mass;
      phi_x *= (1.0 - gamma);
      phi_x += mass * dict.atom(atom);
    }
    if ((k + 1) % kRecomputeEvery == 0) {
      phi_x = dict.matrix() * x;
    }
    r = y - phi_x;
  }
  finalize(trace, dict, y, std::move(x), StopReason::MaxIters);
  return trace;
}

SolverTrace mp_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                     const FwConfig& cfg, const Support* reference_support) {
  cfg.validate();
  check_dimensions(dict, y);
  check_rho_setup(dict, cfg, reference_support);
  const double y_norm = y.norm();
  const double tol = std::max(cfg.residual_tol.value_or(1e-10 * y_norm),
                              kSelectionFloor);
  const double correlation_floor = 1e-15 * y_norm;

  SolverTrace trace;
  trace.algorithm = Algorithm::MatchingPursuit;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dict.size());
  Eigen::VectorXd r = y;

  for (Eigen::Index k = 0; k < cfg.max_iters; ++k) {
    const double r_norm = r.norm();
    if (r_norm <= tol) {
      finalize(trace, dict, y, std::move(x), StopReason::ResidualTol);
      return trace;
    }
    const Eigen::VectorXd c = dict.matrix().transpose() * r;
    const auto [atom, sign] = select_from_correlations(c);
    const double coef = c(atom);
    if (std::abs(coef) <= correlation_floor) {
      // Residual is (numerically) orthogonal to the whole dictionary: the
      // iterate already fits everything the span can explain.
      finalize(trace, dict, y, std::move(x), StopReason::Stationary);
      return trace;
    }

    IterationRecord rec;
    rec.k = k;
    rec.atom = atom;
    rec.sign = sign;
    rec.gamma = 0.0;  // no line search in matching pursuit
    rec.residual_norm = r_norm;
    rec.iterate_l1 = x.lpNorm<1>();
    if (cfg.record_rho) {
      rec.rho = ratio_from_correlations(c, *reference_support);
    }
    trace.records.push_back(std::move(rec));

    x(atom) += coef;
    r -= coef * dict.atom(atom);
    if ((k + 1) % kRecomputeEvery == 0) {
      r = y - dict.matrix() * x;
    }
  }
  finalize(trace, dict, y, std::move(x), StopReason::MaxIters);
  return trace;
}

SolverTrace omp_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                      const FwConfig& cfg, const Support* reference_support) {
  cfg.validate();
  check_dimensions(dict, y);
  check_rho_setup(dict, cfg, reference_support);
  const double y_norm = y.norm();
  const double tol = std::max(cfg.residual_tol.value_or(1e-10 * y_norm),
                              kSelectionFloor);
  const double correlation_floor = 1e-15 * y_norm;

  SolverTrace trace;
  trace.algorithm = Algorithm::OrthogonalMatchingPursuit;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dict.size());
  Eigen::VectorXd r = y;
  std::vector<Eigen::Index> selected;
  std::vector<char> in_selected(static_cast<std::size_t>(dict.size()), 0);

  for (Eigen::Index k = 0; k < cfg.max_iters; ++k) {
    const double r_norm = r.norm();
    if (r_norm <= tol) {
      finalize(trace, dict, y, std::move(x), StopReason::ResidualTol);
      return trace;
    }
    const Eigen::VectorXd c = dict.matrix().transpose() * r;
    const auto [atom, sign] = select_from_correlations(c);
    if (std::abs(c(atom)) <= correlation_floor ||
        in_selected[static_cast<std::size_t>(atom)]) {
      // Orthogonality of the refit makes re-selection impossible in exact
      // arithmetic; both cases mean the residual carries no usable
      // correlation anymore.
      finalize(trace, dict, y, std::move(x), StopReason::Stationary);
      return trace;
    }

    IterationRecord rec;
    rec.k = k;
    rec.atom = atom;
    rec.sign = sign;
    rec.gamma = 0.0;  // no line search in OMP either
    rec.residual_norm = r_norm;
    rec.iterate_l1 = x.lpNorm<1>();
    if (cfg.record_rho) {
      rec.rho = ratio_from_correlations(c, *reference_support);
    }
    trace.records.push_back(std::move(rec));

    selected.push_back(atom);
    in_selected[static_cast<std::size_t>(atom)] = 1;
    const auto s = static_cast<Eigen::Index>(selected.size());
    Eigen::MatrixXd sub(dict.dim(), s);
    for (Eigen::Index j = 0; j < s; ++j) {
      sub.col(j) = dict.matrix().col(selected[static_cast<std::size_t>(j)]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    qr.setThreshold(1e-10);
    qr.compute(sub);
    if (qr.rank() < s) {
      throw RankDeficientSelectionError(
          "selected atoms are numerically linearly dependent after " +
          std::to_string(s) + " selections");
    }
    const Eigen::VectorXd coeffs = qr.solve(y);
    x.setZero();
    for (Eigen::Index j = 0; j < s; ++j) {
      x(selected[static_cast<std::size_t>(j)]) = coeffs(j);
    }
    r = y - sub * coeffs;  // exact refit residual, no incremental drift
  }
  finalize(trace, dict, y, std::move(x), StopReason::MaxIters);
  return trace;
}

}  // namespace fwsparse
