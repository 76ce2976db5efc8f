#pragma once

namespace vplate {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vplate
