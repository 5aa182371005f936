#pragma once

namespace fbs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fbs
