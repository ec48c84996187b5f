#include "fwsparse/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "fwsparse/errors.hpp"
#include "fwsparse/pursuit.hpp"
#include "fwsparse/rng.hpp"
#include "fwsparse/svg.hpp"
#include "fwsparse/theory.hpp"
#include "fwsparse/version.hpp"

namespace fwsparse::experiments {

namespace {

// The cumulative coherence profile is computed once per dictionary and has
// to cover every sparsity a sweep can request; the cap only matters for
// very wide dictionaries where a full profile would dominate runtime.
constexpr Eigen::Index kProfileCap = 4096;

Eigen::Index profile_limit(Eigen::Index n) {
  return std::min<Eigen::Index>(n - 1, kProfileCap);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_mult(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Runs body(0..trials-1) on `jobs` workers. Each trial writes only its own
// result slot, so any worker count produces identical data; aggregation
// happens after the join, in trial order.
void run_trials(int trials, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, trials));
  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int t = next.fetch_add(1);
        if (t >= trials) break;
        try {
          body(t);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// One trial's clipped log-residual curve over iterates 0..max_iters, plus
// its bound line when the contraction guarantee applies to the trial.
struct TrialCurve {
  std::vector<double> log_r;
  double clip_value = 0.0;       // absolute residual floor 1e-16*||y||
  Eigen::Index live_len = 0;     // iterates with residual above the floor
  std::optional<double> bound_slope;  // 0.5 * log(1 - theta)
  double bound_intercept = 0.0;       // log ||y||
};

TrialCurve curve_from_trace(const SolverTrace& trace, double y_l2,
                            Eigen::Index max_iters,
                            std::optional<double> theta) {
  if (!(y_l2 > 0.0)) {
    throw RangeError("experiment trial produced a zero-norm signal");
  }
  TrialCurve out;
  out.clip_value = 1e-16 * y_l2;
  std::vector<double> rs;
  rs.reserve(trace.records.size() + 1);
  for (const IterationRecord& rec : trace.records) {
    rs.push_back(rec.residual_norm);
  }
  rs.push_back(trace.final_residual_norm);

  out.log_r.resize(static_cast<std::size_t>(max_iters) + 1);
  out.live_len = 0;
  for (Eigen::Index k = 0; k <= max_iters; ++k) {
    const double r =
        rs[std::min<std::size_t>(static_cast<std::size_t>(k), rs.size() - 1)];
    out.log_r[static_cast<std::size_t>(k)] =
        std::log(std::max(r, out.clip_value));
    if (r > out.clip_value) out.live_len = k + 1;
  }
  if (theta) {
    out.bound_slope = 0.5 * std::log(1.0 - *theta);
    out.bound_intercept = std::log(y_l2);
  }
  return out;
}

AggregateCurve aggregate(const std::vector<TrialCurve>& curves,
                         Eigen::Index max_iters) {
  AggregateCurve agg;
  const auto len = static_cast<std::size_t>(max_iters) + 1;
  agg.mean_log_r.assign(len, 0.0);
  agg.max_log_r.assign(len, -std::numeric_limits<double>::infinity());
  const bool any_bound =
      std::any_of(curves.begin(), curves.end(),
                  [](const TrialCurve& c) { return c.bound_slope.has_value(); });
  if (any_bound) {
    agg.bound_log_r.assign(len, -std::numeric_limits<double>::infinity());
  }
  for (const TrialCurve& c : curves) {
    agg.live_len = std::max(agg.live_len, c.live_len);
    for (std::size_t k = 0; k < len; ++k) {
      agg.mean_log_r[k] += c.log_r[k];
      agg.max_log_r[k] = std::max(agg.max_log_r[k], c.log_r[k]);
      if (c.bound_slope) {
        agg.bound_log_r[k] =
            std::max(agg.bound_log_r[k],
                     c.bound_intercept + *c.bound_slope * static_cast<double>(k));
      }
    }
  }
  for (std::size_t k = 0; k < len; ++k) {
    agg.mean_log_r[k] /= static_cast<double>(curves.size());
  }
  return agg;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j = {
      {"d", cfg.d},
      {"n", cfg.n},
      {"trials", cfg.trials},
      {"max_iters", cfg.max_iters},
      {"base_seed", cfg.base_seed},
      {"m_multipliers", cfg.m_multipliers},
      {"m_multiplier", cfg.m_multiplier},
      {"beta_multiplier", cfg.beta_multiplier},
      {"beta_pair", {cfg.beta_pair.first, cfg.beta_pair.second}},
  };
  if (cfg.beta_absolute) j["beta_absolute"] = *cfg.beta_absolute;
  return j;
}

nlohmann::json trials_json(const std::vector<TrialInfo>& infos) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TrialInfo& info : infos) {
    arr.push_back({{"dict_seed", info.dict_seed},
                   {"signal_seed", info.signal_seed},
                   {"coherence", info.coherence},
                   {"m_star", info.m_star},
                   {"m", info.m}});
  }
  return arr;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<double> iota_x(std::size_t len) {
  std::vector<double> x(len);
  for (std::size_t k = 0; k < len; ++k) x[k] = static_cast<double>(k);
  return x;
}

// Sparsity for one trial under a multiplier rule.
Eigen::Index scaled_sparsity(double multiplier, Eigen::Index m_star) {
  const auto m = static_cast<Eigen::Index>(
      std::llround(multiplier * static_cast<double>(m_star)));
  if (m < 1) {
    throw ConfigError("sparsity rule produced m < 1 (multiplier " +
                      fmt_mult(multiplier) + ", m_star " +
                      std::to_string(m_star) + ")");
  }
  return m;
}

double trial_beta(const ExperimentConfig& cfg, double multiplier,
                  double x_star_l1) {
  return cfg.beta_absolute ? *cfg.beta_absolute : multiplier * x_star_l1;
}

// The contraction factor for a trial's bound line, present only when the
// guarantee actually applies (recovery condition and interior radius).
std::optional<double> bound_theta(const TheoryReport& report) {
  if (report.recovery_ok && report.contraction_factor) {
    return report.contraction_factor;
  }
  return std::nullopt;
}

struct PreparedTrial {
  Dictionary dict;
  DictionaryMetrics metrics;
  TrialInfo info;
};

PreparedTrial prepare_dictionary(const ExperimentConfig& cfg, int trial) {
  SynthConfig scfg;
  scfg.d = cfg.d;
  scfg.n = cfg.n;
  scfg.m = 0;
  scfg.dict_seed = derive_seed(cfg.base_seed, 2 * static_cast<std::uint64_t>(trial));
  scfg.signal_seed =
      derive_seed(cfg.base_seed, 2 * static_cast<std::uint64_t>(trial) + 1);
  Dictionary dict = gen_dictionary(scfg);
  DictionaryMetrics metrics =
      DictionaryMetrics::analyze(dict, profile_limit(cfg.n));
  TrialInfo info;
  info.dict_seed = scfg.dict_seed;
  info.signal_seed = scfg.signal_seed;
  info.coherence = metrics.coherence();
  info.m_star = metrics.max_recoverable_sparsity();
  return {std::move(dict), std::move(metrics), info};
}

SparseInstance make_instance(const Dictionary& dict, Eigen::Index m,
                             std::uint64_t dict_seed,
                             std::uint64_t signal_seed) {
  if (m > dict.size()) {
    throw ConfigError("sparsity " + std::to_string(m) +
                      " exceeds the atom count " + std::to_string(dict.size()));
  }
  SynthConfig scfg;
  scfg.d = dict.dim();
  scfg.n = dict.size();
  scfg.m = m;
  scfg.dict_seed = dict_seed;
  scfg.signal_seed = signal_seed;
  return gen_instance(dict, scfg);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1 || n < 1) throw ConfigError("d and n must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (m_multipliers.empty()) {
    throw ConfigError("sparsity multiplier list must not be empty");
  }
  for (double mult : m_multipliers) {
    if (!(mult > 0.0)) throw ConfigError("sparsity multipliers must be > 0");
  }
  if (!(m_multiplier > 0.0)) throw ConfigError("m_multiplier must be > 0");
  if (!(beta_multiplier > 0.0)) throw ConfigError("beta_multiplier must be > 0");
  if (!(beta_pair.first > 0.0) || !(beta_pair.second > 0.0)) {
    throw ConfigError("beta pair entries must be > 0");
  }
  if (beta_absolute && !(*beta_absolute > 0.0)) {
    throw ConfigError("beta_absolute must be > 0");
  }
}

double fitted_slope(const std::vector<double>& values, std::size_t first,
                    std::size_t last) {
  if (first >= last || last > values.size() || last - first < 2) {
    throw RangeError("fitted_slope needs a window of at least two points");
  }
  const auto count = static_cast<double>(last - first);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    mean_x += static_cast<double>(i);
    mean_y += values[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxx += dx * dx;
    sxy += dx * (values[i] - mean_y);
  }
  return sxy / sxx;
}

AggregateCurve exp1_convergence(const ExperimentConfig& cfg,
                                const TrialSource& source) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<TrialCurve> curves(static_cast<std::size_t>(cfg.trials));
  std::vector<TrialInfo> infos(static_cast<std::size_t>(cfg.trials));

  run_trials(cfg.trials, cfg.jobs, [&](int t) {
    // Either the standard seeded pipeline or the injected test source; in
    // both cases the trial ends up with a dictionary, its metrics, an
    // instance, and a filled TrialInfo.
    std::optional<std::pair<Dictionary, SparseInstance>> injected;
    std::optional<PreparedTrial> prepared;
    TrialInfo info;
    if (source) {
      injected = source(t);
    } else {
      prepared = prepare_dictionary(cfg, t);
      info = prepared->info;
      info.m = scaled_sparsity(1.0, info.m_star);
    }
    const Dictionary& dict = source ? injected->first : prepared->dict;
    const DictionaryMetrics metrics =
        source ? DictionaryMetrics::analyze(dict, profile_limit(dict.size()))
               : std::move(prepared->metrics);
    const SparseInstance inst =
        source ? std::move(injected->second)
               : make_instance(dict, info.m, info.dict_seed, info.signal_seed);
    if (source) {
      info.coherence = metrics.coherence();
      info.m_star = metrics.max_recoverable_sparsity();
      info.m = inst.support.size();
    }
    const double beta = trial_beta(cfg, cfg.beta_multiplier, inst.coeff_l1);
    FwConfig fw;
    fw.beta = beta;
    fw.max_iters = cfg.max_iters;
    const SolverTrace trace = fw_solve(dict, inst.signal, fw);
    const TheoryReport report = validate_trace(trace, inst, metrics, beta);
    curves[static_cast<std::size_t>(t)] = curve_from_trace(
        trace, inst.signal_l2, cfg.max_iters, bound_theta(report));
    infos[static_cast<std::size_t>(t)] = info;
  });

  const AggregateCurve agg = aggregate(curves, cfg.max_iters);

  auto csv = open_csv(cfg.out_dir / "curves.csv");
  csv << "# fwsparse-exp1-csv v1: k,mean_log_r,max_log_r,bound_log_r; "
         "natural log, residuals clipped at 1e-16*||y||; bound is the "
         "pointwise max of per-trial lines log||y|| + 0.5*k*log(1-theta)\n";
  csv << "k,mean_log_r,max_log_r,bound_log_r\n";
  for (std::size_t k = 0; k < agg.mean_log_r.size(); ++k) {
    csv << k << ',' << fmt_double(agg.mean_log_r[k]) << ','
        << fmt_double(agg.max_log_r[k]) << ',';
    if (!agg.bound_log_r.empty()) csv << fmt_double(agg.bound_log_r[k]);
    csv << '\n';
  }
  if (!csv) throw IoError("short write to curves.csv");
  csv.close();

  const auto xs = iota_x(agg.mean_log_r.size());
  LinePlot plot("Residual decay against the guarantee", "iteration k",
                "log ||r_k||");
  plot.add_series({"mean log residual", xs, agg.mean_log_r, "#1f77b4",
                   LineStyle::Solid});
  plot.add_series(
      {"max log residual", xs, agg.max_log_r, "#d62728", LineStyle::Solid});
  if (!agg.bound_log_r.empty()) {
    plot.add_series({"guarantee envelope", xs, agg.bound_log_r, "#333333",
                     LineStyle::Dashed});
  }
  plot.write_svg(cfg.out_dir / "fig1.svg");

  nlohmann::json meta = {
      {"experiment", "exp1"},
      {"library_version", kVersion},
      {"config", config_json(cfg)},
      {"clip_rule", "log residuals clipped at log(1e-16*||y||_2) per trial"},
      {"bound_rule", "pointwise max of per-trial bound lines"},
      {"injected_source", static_cast<bool>(source)},
      {"live_len", agg.live_len},
      {"trials", trials_json(infos)},
  };
  write_json(meta, cfg.out_dir / "exp1_metadata.json");
  return agg;
}

SweepResult exp2_sparsity_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const auto mult_count = cfg.m_multipliers.size();
  // curve slot [j][t]; a skipped multiplier abandons its whole column
  std::vector<std::vector<TrialCurve>> curves(
      mult_count, std::vector<TrialCurve>(static_cast<std::size_t>(cfg.trials)));
  std::vector<std::atomic<bool>> exceeds(mult_count);
  for (auto& flag : exceeds) flag.store(false);
  std::vector<TrialInfo> infos(static_cast<std::size_t>(cfg.trials));

  run_trials(cfg.trials, cfg.jobs, [&](int t) {
    PreparedTrial prepared = prepare_dictionary(cfg, t);
    prepared.info.m = scaled_sparsity(1.0, prepared.info.m_star);
    infos[static_cast<std::size_t>(t)] = prepared.info;
    for (std::size_t j = 0; j < mult_count; ++j) {
      const double mult = cfg.m_multipliers[j];
      const Eigen::Index m = scaled_sparsity(mult, prepared.info.m_star);
      if (m > cfg.n) {
        exceeds[j].store(true);
        continue;
      }
      const SparseInstance inst = make_instance(
          prepared.dict, m, prepared.info.dict_seed,
          derive_seed(prepared.info.signal_seed, static_cast<std::uint64_t>(j)));
      const double beta = trial_beta(cfg, cfg.beta_multiplier, inst.coeff_l1);
      FwConfig fw;
      fw.beta = beta;
      fw.max_iters = cfg.max_iters;
      const SolverTrace trace = fw_solve(prepared.dict, inst.signal, fw);
      std::optional<double> theta;
      if (m - 1 <= prepared.metrics.m_max()) {
        const TheoryReport report =
            validate_trace(trace, inst, prepared.metrics, beta);
        theta = bound_theta(report);
      }
      curves[j][static_cast<std::size_t>(t)] = curve_from_trace(
          trace, inst.signal_l2, cfg.max_iters, theta);
    }
  });

  SweepResult result;
  for (std::size_t j = 0; j < mult_count; ++j) {
    if (exceeds[j].load()) {
      result.skipped_multipliers.push_back(cfg.m_multipliers[j]);
      std::cerr << "exp2: skipping multiplier " << fmt_mult(cfg.m_multipliers[j])
                << " (sparsity would exceed n)\n";
      continue;
    }
    result.multipliers.push_back(cfg.m_multipliers[j]);
    result.curves.push_back(aggregate(curves[j], cfg.max_iters));
  }
  if (result.multipliers.empty()) {
    throw ConfigError("every sparsity multiplier exceeded the atom count");
  }

  auto csv = open_csv(cfg.out_dir / "sweep.csv");
  csv << "# fwsparse-exp2-csv v1: k, then max_log_r per multiplier, then "
         "bound_log_r for multipliers whose guarantee applies; natural log, "
         "clipped at 1e-16*||y||; bound is the pointwise max envelope\n";
  csv << "k";
  for (double mult : result.multipliers) csv << ",max_log_r_x" << fmt_mult(mult);
  for (std::size_t j = 0; j < result.multipliers.size(); ++j) {
    if (!result.curves[j].bound_log_r.empty()) {
      csv << ",bound_log_r_x" << fmt_mult(result.multipliers[j]);
    }
  }
  csv << '\n';
  const auto len = static_cast<std::size_t>(cfg.max_iters) + 1;
  for (std::size_t k = 0; k < len; ++k) {
    csv << k;
    for (const AggregateCurve& curve : result.curves) {
      csv << ',' << fmt_double(curve.max_log_r[k]);
    }
    for (const AggregateCurve& curve : result.curves) {
      if (!curve.bound_log_r.empty()) {
        csv << ',' << fmt_double(curve.bound_log_r[k]);
      }
    }
    csv << '\n';
  }
  if (!csv) throw IoError("short write to sweep.csv");
  csv.close();

  const auto xs = iota_x(len);
  LinePlot plot("Residual decay as sparsity grows", "iteration k",
                "max log ||r_k||");
  for (std::size_t j = 0; j < result.multipliers.size(); ++j) {
    plot.add_series({"m = " + fmt_mult(result.multipliers[j]) + " m*", xs,
                     result.curves[j].max_log_r, "", LineStyle::Solid});
  }
  for (std::size_t j = 0; j < result.multipliers.size(); ++j) {
    if (!result.curves[j].bound_log_r.empty()) {
      plot.add_series({"guarantee (m = " + fmt_mult(result.multipliers[j]) +
                           " m*)",
                       xs, result.curves[j].bound_log_r, "#333333",
                       LineStyle::Dashed});
    }
  }
  plot.write_svg(cfg.out_dir / "fig2.svg");

  nlohmann::json meta = {
      {"experiment", "exp2"},
      {"library_version", kVersion},
      {"config", config_json(cfg)},
      {"clip_rule", "log residuals clipped at log(1e-16*||y||_2) per trial"},
      {"bound_rule", "pointwise max of per-trial bound lines"},
      {"multipliers_run", result.multipliers},
      {"skipped_multipliers", result.skipped_multipliers},
      {"trials", trials_json(infos)},
  };
  write_json(meta, cfg.out_dir / "exp2_metadata.json");
  return result;
}

Exp3Result exp3_beta_effect(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const double mults[2] = {cfg.beta_pair.first, cfg.beta_pair.second};
  std::vector<std::vector<TrialCurve>> curves(
      2, std::vector<TrialCurve>(static_cast<std::size_t>(cfg.trials)));
  std::vector<TrialInfo> infos(static_cast<std::size_t>(cfg.trials));

  run_trials(cfg.trials, cfg.jobs, [&](int t) {
    PreparedTrial prepared = prepare_dictionary(cfg, t);
    prepared.info.m = scaled_sparsity(1.0, prepared.info.m_star);
    infos[static_cast<std::size_t>(t)] = prepared.info;
    const SparseInstance inst =
        make_instance(prepared.dict, prepared.info.m,
                      prepared.info.dict_seed, prepared.info.signal_seed);
    for (int b = 0; b < 2; ++b) {
      const double beta = mults[b] * inst.coeff_l1;
      FwConfig fw;
      fw.beta = beta;
      fw.max_iters = cfg.max_iters;
      const SolverTrace trace = fw_solve(prepared.dict, inst.signal, fw);
      const TheoryReport report =
          validate_trace(trace, inst, prepared.metrics, beta);
      curves[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] =
          curve_from_trace(trace, inst.signal_l2, cfg.max_iters,
                           bound_theta(report));
    }
  });

  Exp3Result result;
  result.first.beta_multiplier = mults[0];
  result.first.curve = aggregate(curves[0], cfg.max_iters);
  result.second.beta_multiplier = mults[1];
  result.second.curve = aggregate(curves[1], cfg.max_iters);

  auto csv = open_csv(cfg.out_dir / "beta_curves.csv");
  csv << "# fwsparse-exp3-csv v1: k,mean_log_r_b1,bound_log_r_b1,"
         "mean_log_r_b2,bound_log_r_b2 with b1=" << fmt_mult(mults[0])
      << "*||x*||_1, b2=" << fmt_mult(mults[1])
      << "*||x*||_1; natural log, clipped at 1e-16*||y||; bounds are "
         "pointwise max envelopes\n";
  csv << "k,mean_log_r_b1,bound_log_r_b1,mean_log_r_b2,bound_log_r_b2\n";
  const auto len = static_cast<std::size_t>(cfg.max_iters) + 1;
  for (std::size_t k = 0; k < len; ++k) {
    csv << k;
    for (const BetaRunResult* run : {&result.first, &result.second}) {
      csv << ',' << fmt_double(run->curve.mean_log_r[k]) << ',';
      if (!run->curve.bound_log_r.empty()) {
        csv << fmt_double(run->curve.bound_log_r[k]);
      }
    }
    csv << '\n';
  }
  if (!csv) throw IoError("short write to beta_curves.csv");
  csv.close();

  const auto xs = iota_x(len);
  LinePlot plot("Effect of the ball radius on residual decay", "iteration k",
                "mean log ||r_k||");
  plot.add_series({"mean, beta = " + fmt_mult(mults[0]) + " ||x*||_1", xs,
                   result.first.curve.mean_log_r, "#1f77b4",
                   LineStyle::Solid});
  plot.add_series({"mean, beta = " + fmt_mult(mults[1]) + " ||x*||_1", xs,
                   result.second.curve.mean_log_r, "#d62728",
                   LineStyle::Solid});
  if (!result.first.curve.bound_log_r.empty()) {
    plot.add_series({"guarantee, beta = " + fmt_mult(mults[0]) + " ||x*||_1",
                     xs, result.first.curve.bound_log_r, "#1f77b4",
                     LineStyle::Dashed});
  }
  if (!result.second.curve.bound_log_r.empty()) {
    plot.add_series({"guarantee, beta = " + fmt_mult(mults[1]) + " ||x*||_1",
                     xs, result.second.curve.bound_log_r, "#d62728",
                     LineStyle::Dashed});
  }
  plot.write_svg(cfg.out_dir / "fig3.svg");

  nlohmann::json meta = {
      {"experiment", "exp3"},
      {"library_version", kVersion},
      {"config", config_json(cfg)},
      {"clip_rule", "log residuals clipped at log(1e-16*||y||_2) per trial"},
      {"bound_rule", "pointwise max of per-trial bound lines"},
      {"beta_multipliers", {mults[0], mults[1]}},
      {"trials", trials_json(infos)},
  };
  write_json(meta, cfg.out_dir / "exp3_metadata.json");
  return result;
}

AuditSummary run_recovery_audit(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  struct TrialAudit {
    TrialInfo info;
    long long off_fw = 0, off_mp = 0, off_omp = 0;
    Eigen::Index omp_iters = 0;
    bool omp_exact = false;
  };
  std::vector<TrialAudit> audits(static_cast<std::size_t>(cfg.trials));

  run_trials(cfg.trials, cfg.jobs, [&](int t) {
    PreparedTrial prepared = prepare_dictionary(cfg, t);
    TrialAudit& audit = audits[static_cast<std::size_t>(t)];
    prepared.info.m = scaled_sparsity(cfg.m_multiplier, prepared.info.m_star);
    audit.info = prepared.info;
    const SparseInstance inst =
        make_instance(prepared.dict, prepared.info.m,
                      prepared.info.dict_seed, prepared.info.signal_seed);
    const double beta = trial_beta(cfg, cfg.beta_multiplier, inst.coeff_l1);
    FwConfig fw;
    fw.beta = beta;
    fw.max_iters = cfg.max_iters;

    const auto count_off = [&inst](const SolverTrace& trace) {
      long long off = 0;
      for (const IterationRecord& rec : trace.records) {
        if (!inst.support.contains(rec.atom)) ++off;
      }
      return off;
    };
    audit.off_fw = count_off(fw_solve(prepared.dict, inst.signal, fw));
    audit.off_mp = count_off(mp_solve(prepared.dict, inst.signal, fw));
    const SolverTrace omp = omp_solve(prepared.dict, inst.signal, fw);
    audit.off_omp = count_off(omp);
    audit.omp_iters = static_cast<Eigen::Index>(omp.records.size());
    audit.omp_exact = omp.converged &&
                      omp.stop_reason == StopReason::ResidualTol &&
                      audit.omp_iters == prepared.info.m;
  });

  AuditSummary summary;
  summary.trials = cfg.trials;
  summary.guarantee_applies = true;
  summary.omp_all_exact_m = true;
  for (const TrialAudit& audit : audits) {
    summary.per_trial.push_back(audit.info);
    summary.guarantee_applies &= audit.info.m <= audit.info.m_star;
    summary.off_support_fw += audit.off_fw;
    summary.off_support_mp += audit.off_mp;
    summary.off_support_omp += audit.off_omp;
    summary.omp_iterations_histogram[audit.omp_iters] += 1;
    summary.omp_all_exact_m &= audit.omp_exact;
  }

  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [iters, count] : summary.omp_iterations_histogram) {
    histogram[std::to_string(iters)] = count;
  }
  nlohmann::json doc = {
      {"experiment", "audit"},
      {"library_version", kVersion},
      {"config", config_json(cfg)},
      {"guarantee_applies", summary.guarantee_applies},
      {"off_support_selections",
       {{"fw", summary.off_support_fw},
        {"mp", summary.off_support_mp},
        {"omp", summary.off_support_omp},
        {"total", summary.off_support_total()}}},
      {"omp_iterations_histogram", histogram},
      {"omp_all_exact_m", summary.omp_all_exact_m},
      {"violation", summary.violation()},
      {"trials", trials_json(summary.per_trial)},
  };
  write_json(doc, cfg.out_dir / "audit_summary.json");
  return summary;
}

}  // namespace fwsparse::experiments
