#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fwsparse/dictionary.hpp"

namespace fwsparse {

enum class Algorithm { FrankWolfe, MatchingPursuit, OrthogonalMatchingPursuit };

const char* algorithm_name(Algorithm alg);  // "fw" | "mp" | "omp"

struct FwConfig {
  // l1-ball radius for the Frank-Wolfe solver; ignored by MP/OMP.
  double beta = 1.0;
  Eigen::Index max_iters = 1000;
  // Absolute stopping tolerance on ||r_k||_2. Unset means 1e-10*||y||_2,
  // resolved at solve time.
  std::optional<double> residual_tol;
  // Record the good-atom ratio each iteration; requires passing the
  // reference support to the solver.
  bool record_rho = false;

  void validate() const;  // ConfigError on nonpositive beta or max_iters
};

// State captured at the top of one solver iteration, before the update.
struct IterationRecord {
  Eigen::Index k = 0;
  Eigen::Index atom = 0;
  int sign = 0;              // sign of <phi_atom, r_k>
  double gamma = 0.0;        // FW step in [0,1]; 0 for MP/OMP records
  double residual_norm = 0.0;
  double iterate_l1 = 0.0;
  std::optional<double> rho;
};

enum class StopReason {
  ResidualTol,   // ||r|| fell to the configured tolerance (or the 1e-14
                 // selection floor, whichever is larger)
  MaxIters,
  Stationary,    // FW found optimal step 0, or MP/OMP found no usable
                 // correlation: the iterate is optimal for the solver's
                 // own problem, possibly with nonzero residual
};

struct SolverTrace {
  Algorithm algorithm = Algorithm::FrankWolfe;
  std::vector<IterationRecord> records;
  Eigen::VectorXd final_x;
  double final_residual_norm = 0.0;  // recomputed from final_x, not drifted
  bool converged = false;            // false only when max_iters ran out
  StopReason stop_reason = StopReason::MaxIters;
  std::vector<Eigen::Index> active_set;  // sorted indices with final_x != 0
};

struct AtomSelection {
  Eigen::Index atom = 0;
  int sign = 0;
};

// The step direction Frank-Wolfe considers: the ball vertex
// s = sign * beta * e_atom.
struct SparseDirection {
  Eigen::Index atom = 0;
  int sign = 0;
  double beta = 0.0;
};

// Index maximizing |<phi_i, residual>| plus the sign of that inner
// product; exact ties resolve to the lowest index. All three solvers route
// their selection through this. Throws ZeroResidualError when
// ||residual||_2 < 1e-14 and DimensionMismatchError on length mismatch.
AtomSelection select_atom(const Dictionary& dict,
                          const Eigen::VectorXd& residual);

// Exact line-search step for the segment from x_k toward the ball vertex
// s_k: clamp(<Phi(s_k - x_k), r_k> / ||Phi(s_k - x_k)||_2^2, 0, 1). Throws
// DegenerateDirectionError when ||Phi(s_k - x_k)||_2 < 1e-14.
double fw_step_size(const Dictionary& dict, const Eigen::VectorXd& x_k,
                    const SparseDirection& s_k, const Eigen::VectorXd& r_k);

// Good-atom ratio: ||Phi_offsupport^T r||_inf / ||Phi_support^T r||_inf.
// Below 1 means the next greedy selection stays on the support (up to the
// tie rule). Throws UndefinedRatioError when the denominator is below
// 1e-14, RangeError on empty/out-of-range supports.
double good_atom_ratio(const Dictionary& dict, const Support& support,
                       const Eigen::VectorXd& residual);

// The three solvers share the trace contract: one record per executed
// update, recorded state taken before the update, final residual
// recomputed from scratch. `reference_support` feeds the per-iteration
// good-atom ratio and must be non-null iff cfg.record_rho is set
// (ConfigError otherwise).
//
// Frank-Wolfe on the l1 ball of radius cfg.beta: x_0 = 0, step toward the
// selected vertex with the exact line-search step, stop on tolerance,
// gamma = 0, or the iteration cap. Phi*x_k is maintained incrementally and
// recomputed every 100 iterations to cap drift.
SolverTrace fw_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                     const FwConfig& cfg,
                     const Support* reference_support = nullptr);

// Matching pursuit: adds <phi_sel, r_k> to the selected coefficient.
SolverTrace mp_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                     const FwConfig& cfg,
                     const Support* reference_support = nullptr);

// Orthogonal matching pursuit: refits the selected coefficients by least
// squares each iteration (rank-revealing QR, recomputed rather than
// updated; selected sets stay small). The residual is exactly orthogonal
// to every selected atom. Throws RankDeficientSelectionError if the
// selected columns lose full column rank.
SolverTrace omp_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                      const FwConfig& cfg,
                      const Support* reference_support = nullptr);

}  // namespace fwsparse
