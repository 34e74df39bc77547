#pragma once

namespace qspi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qspi
