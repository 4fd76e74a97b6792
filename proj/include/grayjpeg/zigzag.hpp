#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "grayjpeg/block.hpp"

namespace grayjpeg {

/// kZigzagToNatural[i] is the row-major index of the i-th coefficient on the
/// anti-diagonal zig-zag path (0,0) -> (0,1) -> (1,0) -> (2,0) -> ...
inline constexpr std::array<std::uint8_t, kBlockSize> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

inline constexpr std::array<std::uint8_t, kBlockSize> kNaturalToZigzag = [] {
    std::array<std::uint8_t, kBlockSize> inv{};
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        inv[kZigzagToNatural[i]] = static_cast<std::uint8_t>(i);
    }
    return inv;
}();

}  // namespace grayjpeg
