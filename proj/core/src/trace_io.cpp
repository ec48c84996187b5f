#include "fwsparse/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fwsparse/errors.hpp"

namespace fwsparse {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_trace_jsonl(const SolverTrace& trace, const FwConfig& cfg,
                      const SynthConfig& synth,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  nlohmann::json header = {
      {"format", "fwsparse-trace-v1"},
      {"algorithm", algorithm_name(trace.algorithm)},
      {"beta", cfg.beta},
      {"max_iters", cfg.max_iters},
      {"record_rho", cfg.record_rho},
      {"d", synth.d},
      {"n", synth.n},
      {"m", synth.m},
      {"dict_seed", synth.dict_seed},
      {"signal_seed", synth.signal_seed},
      {"iterations", trace.records.size()},
      {"final_residual_norm", trace.final_residual_norm},
      {"converged", trace.converged},
  };
  if (cfg.residual_tol) header["residual_tol"] = *cfg.residual_tol;
  out << header.dump() << '\n';
  for (const IterationRecord& rec : trace.records) {
    nlohmann::json line = {
        {"k", rec.k},          {"atom", rec.atom},
        {"sign", rec.sign},    {"gamma", rec.gamma},
        {"residual_norm", rec.residual_norm},
        {"iterate_l1", rec.iterate_l1},
    };
    if (rec.rho) line["rho"] = *rec.rho;
    out << line.dump() << '\n';
  }
  if (!out) throw IoError("short write to " + path.string());
}

void save_trace_csv(const SolverTrace& trace,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "# fwsparse-trace-csv v1\n";
  out << "k,atom,sign,gamma,residual_norm,iterate_l1,rho\n";
  for (const IterationRecord& rec : trace.records) {
    out << rec.k << ',' << rec.atom << ',' << rec.sign << ','
        << fmt_double(rec.gamma) << ',' << fmt_double(rec.residual_norm)
        << ',' << fmt_double(rec.iterate_l1) << ',';
    if (rec.rho) out << fmt_double(*rec.rho);
    out << '\n';
  }
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace fwsparse
