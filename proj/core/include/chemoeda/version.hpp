#pragma once

namespace chemo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chemo
