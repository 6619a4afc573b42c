#pragma once

namespace kelvsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kelvsim
