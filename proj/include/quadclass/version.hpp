#pragma once

#include <string_view>

namespace quadclass {

inline constexpr std::string_view toolkit_version = "0.1.0";
inline constexpr std::string_view record_schema = "quadclass.record.v1";

}  // namespace quadclass
