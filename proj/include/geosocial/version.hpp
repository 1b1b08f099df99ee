#pragma once

#include <string_view>

namespace geosocial {

inline constexpr std::string_view kToolName = "geosocial";
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace geosocial
