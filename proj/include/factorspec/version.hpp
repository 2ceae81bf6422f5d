#pragma once

namespace fspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fspec
