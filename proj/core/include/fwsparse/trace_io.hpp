#pragma once

#include <filesystem>

#include "fwsparse/pursuit.hpp"
#include "fwsparse/synth.hpp"

namespace fwsparse {

// JSON-lines trace export: first line is a header object carrying the
// solver configuration and the instance seeds (enough to regenerate the
// run), each following line is one iteration record. Missing rho fields are
// omitted rather than null.
void save_trace_jsonl(const SolverTrace& trace, const FwConfig& cfg,
                      const SynthConfig& synth,
                      const std::filesystem::path& path);

// CSV trace export, schema version in the leading comment line:
// k,atom,sign,gamma,residual_norm,iterate_l1,rho. rho cells are empty when
// not recorded. Doubles are printed with %.17g so files round-trip and
// repeat runs are byte-identical.
void save_trace_csv(const SolverTrace& trace,
                    const std::filesystem::path& path);

}  // namespace fwsparse
