#pragma once

namespace tvlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tvlab
