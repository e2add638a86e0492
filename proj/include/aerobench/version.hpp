#pragma once

namespace aerobench {

inline constexpr const char* kVersion = "0.1.0";

} // namespace aerobench
