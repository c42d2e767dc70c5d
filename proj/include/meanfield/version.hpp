#pragma once

namespace meanfield {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace meanfield
