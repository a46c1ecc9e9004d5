#pragma once

namespace relieve {

inline constexpr const char* kToolName = "relieve";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace relieve
