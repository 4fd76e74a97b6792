#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "grayjpeg/block.hpp"
#include "grayjpeg/zigzag.hpp"

namespace grayjpeg {

/// 64 quanta in zig-zag order, each in [1, 255].
class QuantizationTable {
public:
    QuantizationTable() { quanta_.fill(1); }

    static QuantizationTable from_zigzag(std::span<const int> quanta) {
        if (quanta.size() != kBlockSize) {
            throw std::invalid_argument("quantization table needs 64 entries");
        }
        QuantizationTable t;
        for (std::size_t i = 0; i < kBlockSize; ++i) {
            t.quanta_[i] = checked(quanta[i]);
        }
        return t;
    }

    static QuantizationTable from_natural(std::span<const int> quanta) {
        if (quanta.size() != kBlockSize) {
            throw std::invalid_argument("quantization table needs 64 entries");
        }
        QuantizationTable t;
        for (std::size_t i = 0; i < kBlockSize; ++i) {
            t.quanta_[i] = checked(quanta[kZigzagToNatural[i]]);
        }
        return t;
    }

    static QuantizationTable uniform(int quantum) {
        QuantizationTable t;
        t.quanta_.fill(checked(quantum));
        return t;
    }

    /// Quantum at zig-zag position i.
    int zigzag(std::size_t i) const { return quanta_[i]; }
    /// Quantum at natural position (row, col).
    int at(std::size_t row, std::size_t col) const { return quanta_[kNaturalToZigzag[row * kBlockSide + col]]; }
    int natural(std::size_t index) const { return quanta_[kNaturalToZigzag[index]]; }

    const std::array<std::uint16_t, kBlockSize>& zigzag_values() const noexcept { return quanta_; }

    friend bool operator==(const QuantizationTable&, const QuantizationTable&) = default;

private:
    static std::uint16_t checked(int q) {
        if (q < 1 || q > 255) {
            throw std::invalid_argument("quantum outside [1, 255]");
        }
        return static_cast<std::uint16_t>(q);
    }

    std::array<std::uint16_t, kBlockSize> quanta_{};
};

/// Rounds half away from zero.
inline int round_half_away(double value) {
    return static_cast<int>(std::round(value));
}

inline QuantizedBlock quantize(const CoefficientBlock& coeffs, const QuantizationTable& table) {
    QuantizedBlock out;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        out[i] = round_half_away(coeffs[i] / table.natural(i));
    }
    return out;
}

inline CoefficientBlock dequantize(const QuantizedBlock& levels, const QuantizationTable& table) {
    CoefficientBlock out;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        out[i] = static_cast<double>(levels[i]) * table.natural(i);
    }
    return out;
}

/// Scales a base table with the 5000/q, 200-2q quality convention;
/// quality 50 returns the base table unchanged.
inline QuantizationTable scale_table(const QuantizationTable& base, int quality) {
    if (quality < 1 || quality > 100) {
        throw std::invalid_argument("quality must be in [1, 100]");
    }
    const long scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<int, kBlockSize> scaled{};
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        const long q = (base.zigzag(i) * scale + 50) / 100;
        scaled[i] = static_cast<int>(std::clamp(q, 1L, 255L));
    }
    return QuantizationTable::from_zigzag(scaled);
}

/// Recommended luminance table for CCIR-601 class images.
inline QuantizationTable default_luminance_table() {
    static constexpr std::array<int, kBlockSize> natural = {
        16, 11, 10, 16, 24,  40,  51,  61,
        12, 12, 14, 19, 26,  58,  60,  55,
        14, 13, 16, 24, 40,  57,  69,  56,
        14, 17, 22, 29, 51,  87,  80,  62,
        18, 22, 37, 56, 68,  109, 103, 77,
        24, 35, 55, 64, 81,  104, 113, 92,
        49, 64, 78, 87, 103, 121, 120, 101,
        72, 92, 95, 98, 112, 100, 103, 99,
    };
    return QuantizationTable::from_natural(natural);
}

}  // namespace grayjpeg
