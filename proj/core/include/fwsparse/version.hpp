#pragma once

namespace fwsparse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fwsparse
