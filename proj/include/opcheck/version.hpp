#pragma once

namespace opcheck {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace opcheck
