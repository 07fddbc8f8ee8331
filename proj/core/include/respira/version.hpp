#pragma once

namespace respira {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace respira
