#pragma once

namespace adic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adic
