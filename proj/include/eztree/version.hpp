#pragma once

namespace eztree {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eztree
