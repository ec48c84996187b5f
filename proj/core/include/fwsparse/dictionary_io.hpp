#pragma once

#include <filesystem>

#include "fwsparse/dictionary.hpp"

namespace fwsparse {

// Binary dictionary container: 8-byte magic "FWSPDICT", then uint32 d and
// uint32 n, then d*n float64 atom entries in column-major order. All fields
// little-endian. The format is self-describing enough to reject foreign
// files early via the magic and a file-size check.
void save_dictionary(const Dictionary& dict, const std::filesystem::path& path);

// Loads a file written by save_dictionary. Throws IoError on missing file,
// bad magic, or a size mismatch; the usual Dictionary validation applies to
// the payload (atoms must already be unit-norm).
Dictionary load_dictionary(const std::filesystem::path& path);

// Text import for small hand-made dictionaries: d lines of n comma-
// separated values, one atom per column. Pass normalize=true to rescale
// columns on load. Throws IoError on ragged or unparseable input.
Dictionary load_dictionary_csv(const std::filesystem::path& path,
                               bool normalize = false);

}  // namespace fwsparse
