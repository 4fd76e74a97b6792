#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grayjpeg/error.hpp"

namespace grayjpeg {

/// MSB-first bit packer. Output is the raw (unstuffed) entropy payload.
class BitWriter {
public:
    void write(std::uint32_t bits, int count) {
        for (int i = count - 1; i >= 0; --i) {
            accumulator_ = static_cast<std::uint8_t>((accumulator_ << 1) | ((bits >> i) & 1u));
            if (++filled_ == 8) {
                bytes_.push_back(accumulator_);
                accumulator_ = 0;
                filled_ = 0;
            }
        }
    }

    /// Pads the final partial byte with 1-bits and returns the payload.
    std::vector<std::uint8_t> finish() {
        if (filled_ > 0) {
            write((1u << (8 - filled_)) - 1u, 8 - filled_);
        }
        return std::move(bytes_);
    }

    std::size_t bit_count() const noexcept { return bytes_.size() * 8 + static_cast<std::size_t>(filled_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint8_t accumulator_ = 0;
    int filled_ = 0;
};

/// MSB-first reader over an unstuffed payload. Running past the end raises a
/// truncation error carrying the payload byte offset.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    int read_bit() {
        if (position_ >= bytes_.size() * 8) {
            throw JpegError(ErrorKind::truncated, "entropy data ended mid-block", bytes_.size());
        }
        const int bit = (bytes_[position_ >> 3] >> (7 - (position_ & 7))) & 1;
        ++position_;
        return bit;
    }

    std::uint32_t read_bits(int count) {
        std::uint32_t value = 0;
        for (int i = 0; i < count; ++i) {
            value = (value << 1) | static_cast<std::uint32_t>(read_bit());
        }
        return value;
    }

    std::size_t bit_position() const noexcept { return position_; }
    std::size_t byte_position() const noexcept { return position_ >> 3; }
    std::size_t bits_remaining() const noexcept { return bytes_.size() * 8 - position_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t position_ = 0;
};

}  // namespace grayjpeg
