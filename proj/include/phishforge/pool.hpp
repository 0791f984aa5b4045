#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace phishforge::pool {

struct PoolIcon {
    std::string_view name;
    std::span<const std::uint8_t> bytes;
};

// Built-in replacement favicons, sorted by name.
std::span<const PoolIcon> favicons();

}  // namespace phishforge::pool
