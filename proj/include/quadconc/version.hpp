#pragma once

namespace quadconc {

inline constexpr const char* kToolName = "quadconc";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace quadconc
