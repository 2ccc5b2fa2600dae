#pragma once

namespace nlot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlot
