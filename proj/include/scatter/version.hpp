#pragma once

namespace scatter {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kTableFormatVersion = 1;

}  // namespace scatter
