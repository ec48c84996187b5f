// Experiment runner and dictionary inspector. Exit codes: 0 on success, 2
// for configuration or input errors, 3 when the audit detects a violated
// recovery invariant (CI treats that as a red build), 1 for anything
// unexpected.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fwsparse/dictionary.hpp"
#include "fwsparse/dictionary_io.hpp"
#include "fwsparse/errors.hpp"
#include "fwsparse/experiments.hpp"
#include "fwsparse/version.hpp"

namespace {

using fwsparse::experiments::ExperimentConfig;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Registers the options shared by every experiment subcommand. The
// paper-scale flag is a preset, not a hard override: explicitly passed
// values still win.
void add_common_options(CLI::App* sub, ExperimentConfig& cfg,
                        bool& paper_scale) {
  sub->add_option("--d", cfg.d, "signal dimension")
      ->check(CLI::PositiveNumber);
  sub->add_option("--n", cfg.n, "number of dictionary atoms")
      ->check(CLI::PositiveNumber);
  sub->add_option("--trials", cfg.trials, "number of seeded trials")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.base_seed, "base seed for all trials");
  sub->add_option("--beta-mult", cfg.beta_multiplier,
                  "ball radius as a multiple of the instance's ||x*||_1");
  sub->add_option("--beta-abs", cfg.beta_absolute,
                  "absolute ball radius (overrides --beta-mult)");
  sub->add_option("--max-iters", cfg.max_iters, "iteration budget per solve")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out_dir, "output directory");
  sub->add_option("--jobs", cfg.jobs, "worker threads for the trial pool")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--paper-scale", paper_scale,
                "full-scale preset: d=10000, n=20000, 2000 trials (hours of "
                "compute, not exercised in CI)");
  static std::string config_file_shown_in_help;
  sub->add_option("--config", config_file_shown_in_help,
                  "read options from a key=value file (explicit flags win)");
}

// CLI11 consults config files registered on the root command only, never
// on subcommands, so --config is expanded by hand before parsing: each
// key=value line becomes --key value unless the same flag was already
// passed explicitly. Lines starting with # and blank lines are skipped;
// true/false values toggle flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    line = CLI::detail::trim_copy(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::FileError(path + ": expected key=value, got \"" + line +
                           "\"");
    }
    const std::string flag = "--" + CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    const bool given_explicitly =
        std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
          return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    if (given_explicitly) continue;
    if (value == "false") continue;
    extra.push_back(flag);
    if (value != "true") extra.push_back(value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void apply_paper_scale(const CLI::App* sub, ExperimentConfig& cfg) {
  if (sub->count("--d") == 0) cfg.d = 10000;
  if (sub->count("--n") == 0) cfg.n = 20000;
  if (sub->count("--trials") == 0) cfg.trials = 2000;
  if (sub->count("--max-iters") == 0) cfg.max_iters = 1000;
}

void print_curve_summary(const char* name,
                         const fwsparse::experiments::AggregateCurve& curve) {
  std::cout << name << ": " << curve.mean_log_r.size()
            << " iterates, live_len " << curve.live_len << ", final max log r "
            << fmt_double(curve.max_log_r.back()) << '\n';
}

bool has_dictionary_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fwsparse::IoError("cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof magic);
  return in.gcount() == 8 && std::string_view(magic, 8) == "FWSPDICT";
}

int run_analyze(const std::string& path, bool normalize, int profile,
                const std::string& json_out) {
  const fwsparse::Dictionary dict =
      has_dictionary_magic(path) ? fwsparse::load_dictionary(path)
                                 : fwsparse::load_dictionary_csv(path, normalize);
  std::cout << "file: " << path << '\n';
  std::cout << "d: " << dict.dim() << '\n';
  std::cout << "n: " << dict.size() << '\n';
  if (dict.size() < 2) {
    std::cout << "coherence: undefined (single atom)\n";
    return 0;
  }
  const Eigen::Index m_max =
      std::min<Eigen::Index>(dict.size() - 1, std::max(profile, 1));
  const auto metrics = fwsparse::DictionaryMetrics::analyze(dict, m_max);
  std::cout << "coherence: " << fmt_double(metrics.coherence()) << '\n';
  std::cout << "max_recoverable_sparsity: "
            << metrics.max_recoverable_sparsity() << '\n';
  std::cout << "cumulative_coherence[1.." << m_max << "]:";
  const auto& babel = metrics.cumulative_coherence();
  for (Eigen::Index m = 1; m <= m_max; ++m) {
    std::cout << ' ' << fmt_double(babel[static_cast<std::size_t>(m)]);
  }
  std::cout << '\n';
  if (!json_out.empty()) {
    nlohmann::json doc = {
        {"file", path},
        {"library_version", fwsparse::kVersion},
        {"d", dict.dim()},
        {"n", dict.size()},
        {"coherence", metrics.coherence()},
        {"max_recoverable_sparsity", metrics.max_recoverable_sparsity()},
        {"cumulative_coherence", babel},
    };
    std::ofstream out(json_out, std::ios::trunc);
    if (!out) throw fwsparse::IoError("cannot open " + json_out);
    out << doc.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("fwsparse ") + fwsparse::kVersion +
               ": sparse recovery experiments over unit-norm dictionaries"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  bool paper_scale = false;

  CLI::App* exp1 = app.add_subcommand(
      "exp1", "residual decay at m = m* against the contraction guarantee");
  add_common_options(exp1, cfg, paper_scale);

  CLI::App* exp2 = app.add_subcommand(
      "exp2", "residual decay as sparsity grows past the recoverable limit");
  add_common_options(exp2, cfg, paper_scale);
  exp2->add_option("--m-mults", cfg.m_multipliers,
                   "sparsity multipliers on each trial's m*")
      ->delimiter(',');

  CLI::App* exp3 = app.add_subcommand(
      "exp3", "effect of the ball radius on the convergence slope");
  add_common_options(exp3, cfg, paper_scale);
  exp3->add_option("--beta1", cfg.beta_pair.first,
                   "first radius multiplier on ||x*||_1");
  exp3->add_option("--beta2", cfg.beta_pair.second,
                   "second radius multiplier on ||x*||_1");

  CLI::App* audit = app.add_subcommand(
      "audit", "support confinement audit across FW, MP, and OMP");
  add_common_options(audit, cfg, paper_scale);
  audit->add_option("--m-mult", cfg.m_multiplier,
                    "sparsity multiplier on each trial's m*");

  CLI::App* analyze =
      app.add_subcommand("analyze", "dictionary metrics for a file on disk");
  std::string analyze_path;
  bool analyze_normalize = false;
  int analyze_profile = 8;
  std::string analyze_json;
  analyze->add_option("file", analyze_path, "binary or CSV dictionary file")
      ->required();
  analyze->add_flag("--normalize", analyze_normalize,
                    "rescale CSV columns to unit norm on load");
  analyze->add_option("--profile", analyze_profile,
                      "cumulative coherence entries to report")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--json", analyze_json, "also write a JSON report");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      return run_analyze(analyze_path, analyze_normalize, analyze_profile,
                         analyze_json);
    }
    CLI::App* active = exp1->parsed()   ? exp1
                       : exp2->parsed() ? exp2
                       : exp3->parsed() ? exp3
                                        : audit;
    if (paper_scale) apply_paper_scale(active, cfg);

    if (*exp1) {
      const auto curve = fwsparse::experiments::exp1_convergence(cfg);
      print_curve_summary("exp1", curve);
      std::cout << "wrote curves.csv, fig1.svg, exp1_metadata.json to "
                << cfg.out_dir.string() << '\n';
    } else if (*exp2) {
      const auto result = fwsparse::experiments::exp2_sparsity_sweep(cfg);
      for (std::size_t j = 0; j < result.multipliers.size(); ++j) {
        std::cout << "exp2 multiplier " << result.multipliers[j]
                  << ": final max log r "
                  << fmt_double(result.curves[j].max_log_r.back()) << '\n';
      }
      std::cout << "wrote sweep.csv, fig2.svg, exp2_metadata.json to "
                << cfg.out_dir.string() << '\n';
    } else if (*exp3) {
      const auto result = fwsparse::experiments::exp3_beta_effect(cfg);
      print_curve_summary("exp3 beta1", result.first.curve);
      print_curve_summary("exp3 beta2", result.second.curve);
      std::cout << "wrote beta_curves.csv, fig3.svg, exp3_metadata.json to "
                << cfg.out_dir.string() << '\n';
    } else if (*audit) {
      const auto summary = fwsparse::experiments::run_recovery_audit(cfg);
      std::cout << "audit: " << summary.trials << " trials, guarantee "
                << (summary.guarantee_applies ? "applies" : "does not apply")
                << '\n';
      std::cout << "off-support selections: fw " << summary.off_support_fw
                << ", mp " << summary.off_support_mp << ", omp "
                << summary.off_support_omp << '\n';
      std::cout << "omp iteration histogram:";
      for (const auto& [iters, count] : summary.omp_iterations_histogram) {
        std::cout << ' ' << iters << ':' << count;
      }
      std::cout << '\n';
      std::cout << "wrote audit_summary.json to " << cfg.out_dir.string()
                << '\n';
      if (summary.violation()) {
        std::cerr << "audit: recovery invariant violated\n";
        return 3;
      }
    }
    return 0;
  } catch (const fwsparse::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
