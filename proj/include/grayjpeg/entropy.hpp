#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

#include "grayjpeg/block.hpp"
#include "grayjpeg/zigzag.hpp"

namespace grayjpeg {

/// Quantized levels in zig-zag order; index 0 is DC.
struct ZigzagVector {
    std::array<int, kBlockSize> levels{};

    int& operator[](std::size_t i) { return levels[i]; }
    const int& operator[](std::size_t i) const { return levels[i]; }

    std::span<const int, kBlockSize - 1> ac() const { return std::span<const int, kBlockSize>(levels).subspan<1>(); }

    friend bool operator==(const ZigzagVector&, const ZigzagVector&) = default;
};

inline ZigzagVector zigzag_scan(const QuantizedBlock& block) {
    ZigzagVector out;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        out[i] = block[kZigzagToNatural[i]];
    }
    return out;
}

inline QuantizedBlock inverse_zigzag(std::span<const int> levels) {
    if (levels.size() != kBlockSize) {
        throw std::invalid_argument("zig-zag vector must hold 64 levels");
    }
    QuantizedBlock out;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        out[kZigzagToNatural[i]] = levels[i];
    }
    return out;
}

inline QuantizedBlock inverse_zigzag(const ZigzagVector& vector) { return inverse_zigzag(std::span<const int>(vector.levels)); }

/// DC prediction residuals; the predictor starts at 0.
inline std::vector<int> dc_differentials(std::span<const int> dc_values) {
    if (dc_values.empty()) {
        throw std::invalid_argument("dc_differentials requires at least one value");
    }
    std::vector<int> out(dc_values.size());
    int previous = 0;
    for (std::size_t i = 0; i < dc_values.size(); ++i) {
        out[i] = dc_values[i] - previous;
        previous = dc_values[i];
    }
    return out;
}

inline std::vector<int> reconstruct_dc(std::span<const int> differentials) {
    std::vector<int> out(differentials.size());
    int acc = 0;
    for (std::size_t i = 0; i < differentials.size(); ++i) {
        acc += differentials[i];
        out[i] = acc;
    }
    return out;
}

inline constexpr int kMaxMagnitude = 32767;
inline constexpr int kMaxDcCategory = 11;
inline constexpr int kMaxAcCategory = 10;

/// Bit length of |value| (the SSSS category): 0 for 0, else ceil(log2(|value| + 1)).
inline int magnitude_category(int value) {
    if (value < -kMaxMagnitude || value > kMaxMagnitude) {
        throw std::invalid_argument("magnitude exceeds 32767");
    }
    unsigned magnitude = static_cast<unsigned>(std::abs(value));
    int size = 0;
    while (magnitude != 0) {
        ++size;
        magnitude >>= 1;
    }
    return size;
}

/// The `size` extra bits following a Huffman symbol. Negative values are sent
/// as the low bits of value - 1.
inline std::uint32_t amplitude_bits(int value, int size) {
    if (size == 0) {
        return 0;
    }
    const int coded = value < 0 ? value - 1 : value;
    return static_cast<std::uint32_t>(coded) & ((1u << size) - 1u);
}

/// Inverse of amplitude_bits: a leading 0 bit marks a negative value.
inline int extend_amplitude(std::uint32_t bits, int size) {
    if (size == 0) {
        return 0;
    }
    const auto threshold = 1u << (size - 1);
    if (bits < threshold) {
        return static_cast<int>(bits) - static_cast<int>((1u << size) - 1u);
    }
    return static_cast<int>(bits);
}

struct IntermediateSymbol {
    int run = 0;
    int size = 0;
    int amplitude = 0;

    static constexpr IntermediateSymbol eob() { return {0, 0, 0}; }
    static constexpr IntermediateSymbol zrl() { return {15, 0, 0}; }

    bool is_eob() const { return run == 0 && size == 0; }
    bool is_zrl() const { return run == 15 && size == 0; }

    /// RRRRSSSS byte used as the Huffman symbol.
    std::uint8_t code() const { return static_cast<std::uint8_t>((run << 4) | size); }

    friend bool operator==(const IntermediateSymbol&, const IntermediateSymbol&) = default;
};

/// Converts the 63 AC levels of one block into (run, size, amplitude) symbols.
inline std::vector<IntermediateSymbol> run_length_symbols(std::span<const int> ac_levels) {
    if (ac_levels.size() != kBlockSize - 1) {
        throw std::invalid_argument("run_length_symbols requires 63 AC levels");
    }
    std::vector<IntermediateSymbol> out;
    int run = 0;
    for (int level : ac_levels) {
        if (level == 0) {
            ++run;
            continue;
        }
        while (run > 15) {
            out.push_back(IntermediateSymbol::zrl());
            run -= 16;
        }
        out.push_back({run, magnitude_category(level), level});
        run = 0;
    }
    if (run > 0) {
        out.push_back(IntermediateSymbol::eob());
    }
    return out;
}

/// Expands symbols back into 63 AC levels; rejects streams that overrun the block.
inline std::array<int, kBlockSize - 1> expand_run_length(std::span<const IntermediateSymbol> symbols) {
    std::array<int, kBlockSize - 1> out{};
    std::size_t pos = 0;
    for (const auto& s : symbols) {
        if (s.is_eob()) {
            break;
        }
        if (s.is_zrl()) {
            pos += 16;
        } else {
            pos += static_cast<std::size_t>(s.run);
            if (pos >= out.size()) {
                throw std::invalid_argument("run-length symbols overrun the block");
            }
            out[pos++] = s.amplitude;
        }
        if (pos > out.size()) {
            throw std::invalid_argument("run-length symbols overrun the block");
        }
    }
    return out;
}

}  // namespace grayjpeg
