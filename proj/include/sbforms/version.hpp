#pragma once

namespace sbf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sbf
