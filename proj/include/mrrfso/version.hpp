#pragma once

namespace mrrfso {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mrrfso
