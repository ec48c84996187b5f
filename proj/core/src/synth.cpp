#include "fwsparse/synth.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fwsparse/errors.hpp"
#include "fwsparse/rng.hpp"

namespace fwsparse {

void SynthConfig::validate() const {
  if (d < 1) throw ConfigError("synth: d must be >= 1");
  if (n < 1) throw ConfigError("synth: n must be >= 1");
  if (m < 0 || m > n) throw ConfigError("synth: m must lie in [0, n]");
}

Dictionary gen_dictionary(const SynthConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.dict_seed);
  Eigen::MatrixXd atoms(cfg.d, cfg.n);
  for (Eigen::Index j = 0; j < cfg.n; ++j) {
    for (Eigen::Index i = 0; i < cfg.d; ++i) {
      atoms(i, j) = rng.next_normal();
    }
  }
  return Dictionary(std::move(atoms), /*normalize=*/true);
}

SparseInstance gen_instance(const Dictionary& dict, const SynthConfig& cfg) {
  cfg.validate();
  if (dict.dim() != cfg.d || dict.size() != cfg.n) {
    throw DimensionMismatchError("gen_instance: dictionary is " +
                                 std::to_string(dict.dim()) + "x" +
                                 std::to_string(dict.size()) +
                                 " but config declares " +
                                 std::to_string(cfg.d) + "x" +
                                 std::to_string(cfg.n));
  }
  SplitMix64 rng(cfg.signal_seed);
  SparseInstance inst;
  inst.support = Support(sample_distinct_indices(cfg.m, cfg.n, rng));
  inst.coefficients = Eigen::VectorXd::Zero(cfg.n);
  constexpr double kMinMagnitude = 1e-12;
  for (Eigen::Index idx : inst.support.indices()) {
    double c = 0.0;
    do {
      c = rng.next_normal();
    } while (std::abs(c) < kMinMagnitude);
    inst.coefficients(idx) = c;
  }
  inst.signal = dict.matrix() * inst.coefficients;
  inst.coeff_l1 = inst.coefficients.lpNorm<1>();
  inst.signal_l2 = inst.signal.norm();
  return inst;
}

void save_instance_json(const SparseInstance& inst, const SynthConfig& cfg,
                        const std::filesystem::path& path) {
  nlohmann::json pairs = nlohmann::json::array();
  for (Eigen::Index idx : inst.support.indices()) {
    pairs.push_back({idx, inst.coefficients(idx)});
  }
  const nlohmann::json doc = {
      {"d", cfg.d},
      {"n", cfg.n},
      {"m", inst.support.size()},
      {"support", inst.support.indices()},
      {"coefficients", pairs},
      {"dict_seed", cfg.dict_seed},
      {"signal_seed", cfg.signal_seed},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

SparseInstance load_instance_json(const Dictionary& dict,
                                  const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    const auto d = doc.at("d").get<Eigen::Index>();
    const auto n = doc.at("n").get<Eigen::Index>();
    if (dict.dim() != d || dict.size() != n) {
      throw DimensionMismatchError(
          "fixture was generated for a " + std::to_string(d) + "x" +
          std::to_string(n) + " dictionary");
    }
    SparseInstance inst;
    inst.support = Support(doc.at("support").get<std::vector<Eigen::Index>>());
    inst.coefficients = Eigen::VectorXd::Zero(n);
    for (const auto& pair : doc.at("coefficients")) {
      const auto idx = pair.at(0).get<Eigen::Index>();
      if (idx < 0 || idx >= n) {
        throw IoError(path.string() + ": coefficient index out of range");
      }
      inst.coefficients(idx) = pair.at(1).get<double>();
    }
    inst.signal = dict.matrix() * inst.coefficients;
    inst.coeff_l1 = inst.coefficients.lpNorm<1>();
    inst.signal_l2 = inst.signal.norm();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace fwsparse
