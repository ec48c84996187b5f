#pragma once

#include <cstdint>
#include <filesystem>

#include <Eigen/Core>

#include "fwsparse/dictionary.hpp"

namespace fwsparse {

struct SynthConfig {
  Eigen::Index d = 0;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::uint64_t dict_seed = 0;
  std::uint64_t signal_seed = 0;

  // ConfigError unless d >= 1, n >= 1 and 0 <= m <= n.
  void validate() const;
};

// A ground-truth sparse coding problem: y is exactly the dictionary times
// the m-sparse coefficient vector, no noise.
struct SparseInstance {
  Eigen::VectorXd coefficients;  // length n, nonzero exactly on the support
  Support support;
  Eigen::VectorXd signal;        // length d
  double coeff_l1 = 0.0;
  double signal_l2 = 0.0;
};

// d x n matrix of i.i.d. standard normal entries, drawn column by column
// from SplitMix64(cfg.dict_seed) via inverse-CDF sampling, columns then
// rescaled to unit norm. Pure function of the config, so repeat calls are
// bit-identical.
Dictionary gen_dictionary(const SynthConfig& cfg);

// Support of size m drawn uniformly without replacement from
// SplitMix64(cfg.signal_seed), then coefficients i.i.d. standard normal
// assigned in ascending support order from the same stream. Draws with
// magnitude below 1e-12 are rejected and redrawn so the instance is exactly
// m-sparse. The signal is assembled as dictionary * coefficients.
SparseInstance gen_instance(const Dictionary& dict, const SynthConfig& cfg);

// JSON fixture of an instance: {d, n, m, support, coefficients (index/value
// pairs), dict_seed, signal_seed}. The signal is not stored; replaying the
// fixture against the same dictionary rebuilds it.
void save_instance_json(const SparseInstance& inst, const SynthConfig& cfg,
                        const std::filesystem::path& path);

// Rebuilds an instance saved by save_instance_json against the dictionary
// it was generated from. Throws IoError on malformed fixtures and
// DimensionMismatchError if the dictionary shape disagrees.
SparseInstance load_instance_json(const Dictionary& dict,
                                  const std::filesystem::path& path);

}  // namespace fwsparse
