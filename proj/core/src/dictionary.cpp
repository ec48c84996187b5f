#include "fwsparse/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fwsparse/errors.hpp"

namespace fwsparse {

namespace {

// Entries are plain column dot products rather than a blocked symmetric
// rank update: blocked kernels round each entry differently depending on
// its position, which would make the profile depend on atom order and
// break exact agreement with reference implementations of the same sums.
Eigen::MatrixXd compute_gram(const Dictionary& dict) {
  const Eigen::Index n = dict.size();
  const Eigen::MatrixXd& atoms = dict.matrix();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    gram(j, j) = atoms.col(j).squaredNorm();
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double ip = atoms.col(i).dot(atoms.col(j));
      gram(i, j) = ip;
      gram(j, i) = ip;
    }
  }
  return gram;
}

double coherence_from_gram(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  if (n < 2) {
    throw SingleAtomError("coherence needs at least two atoms");
  }
  double mu = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      mu = std::max(mu, std::abs(gram(i, j)));
    }
  }
  return mu;
}

// Profile entry m is the largest top-m row sum of off-diagonal |Gram|
// values. Each row's candidates are partially sorted descending and summed
// largest-first; oracle code reproducing these values must sum in the same
// order to match bitwise.
std::vector<double> babel_from_gram(const Eigen::MatrixXd& gram,
                                    Eigen::Index m_max) {
  const Eigen::Index n = gram.rows();
  if (m_max < 0 || m_max > n - 1) {
    throw RangeError("cumulative coherence: m_max must lie in [0, n-1]");
  }
  std::vector<double> profile(static_cast<std::size_t>(m_max) + 1, 0.0);
  std::vector<double> row(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row[w++] = std::abs(gram(i, j));
    }
    std::partial_sort(row.begin(), row.begin() + m_max, row.end(),
                      std::greater<>());
    double sum = 0.0;
    for (Eigen::Index m = 1; m <= m_max; ++m) {
      sum += row[static_cast<std::size_t>(m) - 1];
      auto& slot = profile[static_cast<std::size_t>(m)];
      slot = std::max(slot, sum);
    }
  }
  return profile;
}

}  // namespace

Dictionary::Dictionary(Eigen::MatrixXd atoms, bool normalize)
    : atoms_(std::move(atoms)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1) {
    throw RangeError("dictionary must have at least one row and one column");
  }
  if (!atoms_.allFinite()) {
    throw NonFiniteError("dictionary contains NaN or infinite entries");
  }
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double norm = atoms_.col(j).norm();
    if (normalize) {
      if (norm < kZeroNormFloor) {
        throw ZeroColumnError("atom " + std::to_string(j) +
                              " has numerically zero norm");
      }
      atoms_.col(j) /= norm;
    } else if (std::abs(norm - 1.0) > kUnitNormTol) {
      throw NotUnitNormError("atom " + std::to_string(j) + " has norm " +
                             std::to_string(norm) + ", expected 1");
    }
  }
}

Eigen::MatrixXd::ConstColXpr Dictionary::atom(Eigen::Index i) const {
  if (i < 0 || i >= size()) {
    throw RangeError("atom index " + std::to_string(i) + " outside [0, " +
                     std::to_string(size()) + ")");
  }
  return atoms_.col(i);
}

Support::Support(std::vector<Eigen::Index> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw RangeError("support indices must be nonnegative");
  }
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw RangeError("support indices must be distinct");
  }
}

bool Support::contains(Eigen::Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

Eigen::Index Support::max_index() const {
  if (indices_.empty()) throw RangeError("max_index of an empty support");
  return indices_.back();
}

DictionaryMetrics DictionaryMetrics::analyze(const Dictionary& dict,
                                             Eigen::Index m_max) {
  DictionaryMetrics metrics;
  metrics.dim_ = dict.dim();
  metrics.gram_ = compute_gram(dict);
  metrics.babel_ = babel_from_gram(metrics.gram_, m_max);
  return metrics;
}

double DictionaryMetrics::coherence() const {
  return coherence_from_gram(gram_);
}

Eigen::Index DictionaryMetrics::max_recoverable_sparsity() const {
  return fwsparse::max_recoverable_sparsity(coherence(), size());
}

double DictionaryMetrics::min_singular_value_bound(Eigen::Index m) const {
  if (m < 1 || m > m_max() + 1) {
    throw RangeError("min_singular_value_bound: m must lie in [1, m_max+1]");
  }
  const double mu1 = babel_[static_cast<std::size_t>(m) - 1];
  if (mu1 >= 1.0) {
    throw BoundVacuousError(
        "cumulative coherence at m-1 is " + std::to_string(mu1) +
        "; the singular value bound is vacuous");
  }
  return std::sqrt(1.0 - mu1);
}

double coherence(const Dictionary& dict) {
  return coherence_from_gram(compute_gram(dict));
}

std::vector<double> cumulative_coherence(const Dictionary& dict,
                                         Eigen::Index m_max) {
  return babel_from_gram(compute_gram(dict), m_max);
}

Eigen::Index max_recoverable_sparsity(double mu, Eigen::Index n) {
  if (n < 1) throw RangeError("max_recoverable_sparsity: n must be >= 1");
  // Normalized atoms keep |<phi_i, phi_j>| <= 1 up to roundoff; tolerate
  // the roundoff, reject anything clearly out of range.
  if (!(mu >= 0.0) || mu > 1.0 + 1e-12) {
    throw RangeError("max_recoverable_sparsity: coherence must lie in [0,1]");
  }
  mu = std::min(mu, 1.0);
  if (mu == 0.0) return n;  // orthogonal atoms: every sparsity is recoverable
  const double limit = 0.5 * (1.0 / mu + 1.0);
  Eigen::Index m = n;
  if (limit < static_cast<double>(n)) {
    m = static_cast<Eigen::Index>(std::ceil(limit));
  }
  while (m >= 1 && !(static_cast<double>(m) < limit)) --m;
  return m;
}

double exact_recovery_coefficient(const Dictionary& dict,
                                  const Support& support) {
  if (support.empty()) {
    throw RangeError("exact_recovery_coefficient: empty support");
  }
  if (support.max_index() >= dict.size()) {
    throw RangeError("support index outside dictionary");
  }
  const Eigen::Index s = support.size();
  Eigen::MatrixXd sub(dict.dim(), s);
  for (Eigen::Index k = 0; k < s; ++k) {
    sub.col(k) = dict.matrix().col(support.indices()[static_cast<std::size_t>(k)]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  constexpr double kRankFloor = 1e-10;
  if (svd.singularValues()(s - 1) <= kRankFloor) {
    throw RankDeficientSupportError(
        "support columns are numerically rank deficient (sigma_min = " +
        std::to_string(svd.singularValues()(s - 1)) + ")");
  }
  // pinv(Phi_S) phi_i for all i at once: V diag(1/sigma) U^T Phi.
  const Eigen::MatrixXd pinv =
      svd.matrixV() *
      svd.singularValues().cwiseInverse().asDiagonal() *
      svd.matrixU().transpose();
  const Eigen::MatrixXd coeffs = pinv * dict.matrix();
  // Off-support atoms only; a full-rank support covering every atom leaves
  // nothing to measure and scores 0.
  double erc = 0.0;
  for (Eigen::Index i = 0; i < dict.size(); ++i) {
    if (support.contains(i)) continue;
    erc = std::max(erc, coeffs.col(i).lpNorm<1>());
  }
  return erc;
}

}  // namespace fwsparse
