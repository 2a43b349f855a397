#pragma once

namespace bootcopula {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace bootcopula
