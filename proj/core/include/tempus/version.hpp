#pragma once

namespace tempus {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tempus
