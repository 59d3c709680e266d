#pragma once

namespace graphon_lab {

inline constexpr const char* kVersion = "0.1.0";
// Bumped whenever a JSON or CSV layout changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace graphon_lab
