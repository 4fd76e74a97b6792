#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace grayjpeg {

inline constexpr std::size_t kBlockSide = 8;
inline constexpr std::size_t kBlockSize = kBlockSide * kBlockSide;

/// Fixed 8x8 grid stored row-major. The tag keeps spatial samples, DCT
/// coefficients and quantizer levels from being mixed up.
template <typename T, typename Tag>
struct Block {
    using value_type = T;

    std::array<T, kBlockSize> values{};

    constexpr T& operator()(std::size_t row, std::size_t col) { return values[row * kBlockSide + col]; }
    constexpr const T& operator()(std::size_t row, std::size_t col) const { return values[row * kBlockSide + col]; }

    constexpr T& operator[](std::size_t index) { return values[index]; }
    constexpr const T& operator[](std::size_t index) const { return values[index]; }

    constexpr auto begin() { return values.begin(); }
    constexpr auto end() { return values.end(); }
    constexpr auto begin() const { return values.begin(); }
    constexpr auto end() const { return values.end(); }

    friend constexpr bool operator==(const Block&, const Block&) = default;
};

struct SampleTag {};
struct SpatialTag {};
struct FrequencyTag {};
struct LevelTag {};

/// Level-shifted 8-bit samples, each in [-128, 127].
using SampleBlock = Block<int, SampleTag>;
/// Real-valued spatial grid (IDCT output before rounding, or arbitrary real input).
using RealBlock = Block<double, SpatialTag>;
/// DCT coefficients F[k,l], row index k is vertical frequency.
using CoefficientBlock = Block<double, FrequencyTag>;
/// Quantizer output levels in natural (row-major) order.
using QuantizedBlock = Block<int, LevelTag>;

inline void validate_samples(const SampleBlock& block) {
    for (int v : block) {
        if (v < -128 || v > 127) {
            throw std::invalid_argument("sample block entry outside [-128, 127]");
        }
    }
}

inline RealBlock to_real(const SampleBlock& block) {
    RealBlock out;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        out[i] = block[i];
    }
    return out;
}

}  // namespace grayjpeg
