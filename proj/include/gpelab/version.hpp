#pragma once

namespace gpelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gpelab
