#pragma once

namespace phishforge {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kDefaultUserAgent =
        "phishforge/0.1.0 (research corpus builder)";

}  // namespace phishforge
