#pragma once

#include <vector>

#include <Eigen/Core>

namespace fwsparse {

// A dictionary is a d x n matrix whose n columns (atoms) all have unit
// Euclidean norm. Construction validates every column; all analysis code
// can then assume normalization.
class Dictionary {
 public:
  // Takes ownership of `atoms`. With normalize=false columns must already
  // be unit-norm to within kUnitNormTol (NotUnitNormError otherwise); with
  // normalize=true they are rescaled in place (ZeroColumnError if a column
  // norm falls below kZeroNormFloor). Non-finite entries are rejected
  // (NonFiniteError), as are empty matrices (RangeError).
  explicit Dictionary(Eigen::MatrixXd atoms, bool normalize = false);

  Eigen::Index dim() const { return atoms_.rows(); }   // signal dimension d
  Eigen::Index size() const { return atoms_.cols(); }  // number of atoms n

  const Eigen::MatrixXd& matrix() const { return atoms_; }
  Eigen::MatrixXd::ConstColXpr atom(Eigen::Index i) const;

  static constexpr double kUnitNormTol = 1e-8;
  static constexpr double kZeroNormFloor = 1e-12;

 private:
  Eigen::MatrixXd atoms_;
};

// Sorted set of atom indices (a candidate or ground-truth support).
// Duplicates and negative indices are rejected with RangeError. Upper
// bounds against a dictionary are checked where the support is used.
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<Eigen::Index> indices);

  Eigen::Index size() const { return static_cast<Eigen::Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(Eigen::Index i) const;
  const std::vector<Eigen::Index>& indices() const { return indices_; }
  Eigen::Index max_index() const;  // RangeError when empty

  bool operator==(const Support&) const = default;

 private:
  std::vector<Eigen::Index> indices_;
};

// Pairwise-similarity summaries of a dictionary, all derived from one Gram
// matrix so that related quantities are bit-consistent with each other
// (cumulative_coherence()[1] matches coherence() exactly, and so on).
class DictionaryMetrics {
 public:
  // Computes the Gram matrix once and the cumulative coherence profile for
  // set sizes 0..m_max (m_max in [0, n-1], RangeError otherwise).
  static DictionaryMetrics analyze(const Dictionary& dict, Eigen::Index m_max);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return gram_.rows(); }
  Eigen::Index m_max() const { return static_cast<Eigen::Index>(babel_.size()) - 1; }

  // Largest off-diagonal |Gram| entry. SingleAtomError when n < 2.
  double coherence() const;

  // Cumulative coherence (Babel function) profile: entry m is the maximum,
  // over atoms i and size-m sets L not containing i, of the sum of |<phi_i,
  // phi_j>| for j in L. Entry 0 is 0 by convention.
  const std::vector<double>& cumulative_coherence() const { return babel_; }

  // Largest sparsity m satisfying m < (1/coherence + 1)/2, the regime in
  // which greedy selection provably stays on the true support. Returns n
  // for an orthogonal dictionary (every m works). SingleAtomError when n<2.
  Eigen::Index max_recoverable_sparsity() const;

  // Lower bound sqrt(1 - mu1(m-1)) on the smallest singular value of any
  // m-column subdictionary. Requires 1 <= m <= m_max()+1 (RangeError) and a
  // nonvacuous bound mu1(m-1) < 1 (BoundVacuousError).
  double min_singular_value_bound(Eigen::Index m) const;

  const Eigen::MatrixXd& gram() const { return gram_; }

 private:
  DictionaryMetrics() = default;
  Eigen::Index dim_ = 0;
  Eigen::MatrixXd gram_;
  std::vector<double> babel_;
};

// Standalone variants for one-off queries; each computes its own Gram.
double coherence(const Dictionary& dict);
std::vector<double> cumulative_coherence(const Dictionary& dict,
                                         Eigen::Index m_max);

// Largest m with m < (1/mu + 1)/2, capped at n; n when mu == 0. RangeError
// for mu outside [0,1] or n < 1.
Eigen::Index max_recoverable_sparsity(double mu, Eigen::Index n);

// Exact recovery coefficient: max over atoms i outside the support of
// ||pinv(Phi_S) phi_i||_1, computed through an SVD of the support columns.
// Values below 1 certify that every greedy residual stays inside the
// support span. Throws RankDeficientSupportError when the support columns
// have smallest singular value <= 1e-10, RangeError for empty supports or
// indices outside the dictionary.
double exact_recovery_coefficient(const Dictionary& dict, const Support& support);

}  // namespace fwsparse
