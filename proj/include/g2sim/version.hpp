#pragma once

namespace g2sim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace g2sim
