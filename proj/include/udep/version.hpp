#pragma once

namespace udep {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace udep
