#pragma once

namespace ostat {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ostat
