#pragma once

namespace etrap {
inline constexpr const char* kVersion = "0.1.0";
}
