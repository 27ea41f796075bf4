#pragma once

namespace levyif {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace levyif
