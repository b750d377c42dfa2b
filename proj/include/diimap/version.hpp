#pragma once

#include <string_view>

namespace diimap {

inline constexpr std::string_view kToolName = "diimap";
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace diimap
