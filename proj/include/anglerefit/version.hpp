#pragma once

namespace anglerefit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace anglerefit
