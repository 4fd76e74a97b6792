#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grayjpeg/bitio.hpp"
#include "grayjpeg/entropy.hpp"
#include "grayjpeg/error.hpp"
#include "grayjpeg/huffman.hpp"

namespace grayjpeg {

/// Stateful Huffman coder for one scan: carries the DC predictor across blocks.
/// One instance per stream.
class ScanEncoder {
public:
    ScanEncoder(const HuffmanTable& dc_table, const HuffmanTable& ac_table) : dc_(dc_table), ac_(ac_table) {}

    void encode_block(const ZigzagVector& block) {
        const int diff = block[0] - predictor_;
        predictor_ = block[0];
        const int dc_size = magnitude_category(diff);
        if (dc_size > kMaxDcCategory) {
            throw JpegError(ErrorKind::coding, "DC difference " + std::to_string(diff) + " exceeds baseline range");
        }
        dc_.encode(static_cast<std::uint8_t>(dc_size), writer_);
        writer_.write(amplitude_bits(diff, dc_size), dc_size);

        for (const auto& symbol : run_length_symbols(block.ac())) {
            if (symbol.size > kMaxAcCategory) {
                throw JpegError(ErrorKind::coding, "AC level " + std::to_string(symbol.amplitude) + " exceeds baseline range");
            }
            ac_.encode(symbol.code(), writer_);
            writer_.write(amplitude_bits(symbol.amplitude, symbol.size), symbol.size);
        }
    }

    /// Pads with 1-bits and returns the unstuffed payload.
    std::vector<std::uint8_t> finish() { return writer_.finish(); }

private:
    HuffmanEncoder dc_;
    HuffmanEncoder ac_;
    BitWriter writer_;
    int predictor_ = 0;
};

inline std::vector<std::uint8_t> huffman_encode(std::span<const ZigzagVector> blocks, const HuffmanTable& dc_table,
                                                const HuffmanTable& ac_table) {
    ScanEncoder encoder(dc_table, ac_table);
    for (const auto& block : blocks) {
        encoder.encode_block(block);
    }
    return encoder.finish();
}

/// Decoder counterpart of ScanEncoder.
class ScanDecoder {
public:
    ScanDecoder(std::span<const std::uint8_t> payload, const HuffmanTable& dc_table, const HuffmanTable& ac_table)
        : dc_(dc_table), ac_(ac_table), reader_(payload) {}

    ZigzagVector decode_block() {
        ZigzagVector out;
        const int dc_size = dc_.decode(reader_);
        if (dc_size > kMaxDcCategory) {
            throw corrupt("DC magnitude category " + std::to_string(dc_size) + " out of range");
        }
        predictor_ += extend_amplitude(reader_.read_bits(dc_size), dc_size);
        if (predictor_ < -kMaxMagnitude || predictor_ > kMaxMagnitude) {
            throw corrupt("DC level leaves the 16-bit range");
        }
        out[0] = predictor_;

        std::size_t k = 1;
        while (k < kBlockSize) {
            const std::uint8_t rs = ac_.decode(reader_);
            const int run = rs >> 4;
            const int size = rs & 15;
            if (size == 0) {
                if (run == 0) {
                    break;
                }
                if (run != 15) {
                    throw corrupt("invalid AC symbol with zero size");
                }
                k += 16;
                if (k > kBlockSize) {
                    throw corrupt("zero run overruns the block");
                }
                continue;
            }
            if (size > kMaxAcCategory) {
                throw corrupt("AC magnitude category out of range");
            }
            k += static_cast<std::size_t>(run);
            if (k >= kBlockSize) {
                throw corrupt("AC run overruns the block");
            }
            out[k++] = extend_amplitude(reader_.read_bits(size), size);
        }
        return out;
    }

    /// Requires that only the final byte's 1-bit padding is left.
    void finish() {
        const std::size_t remaining = reader_.bits_remaining();
        if (remaining >= 8) {
            throw corrupt(std::to_string(remaining / 8) + " unused bytes after the last block");
        }
        for (std::size_t i = 0; i < remaining; ++i) {
            if (reader_.read_bit() != 1) {
                throw corrupt("padding bits are not all ones");
            }
        }
    }

private:
    JpegError corrupt(const std::string& what) const {
        return JpegError(ErrorKind::corrupt_stream, what, reader_.byte_position());
    }

    HuffmanDecoder dc_;
    HuffmanDecoder ac_;
    BitReader reader_;
    int predictor_ = 0;
};

/// Decodes exactly block_count blocks and requires the payload to end there.
inline std::vector<ZigzagVector> huffman_decode(std::span<const std::uint8_t> payload, const HuffmanTable& dc_table,
                                                const HuffmanTable& ac_table, std::size_t block_count) {
    // Every block costs at least one DC and one AC code bit.
    if (payload.size() * 8 < block_count * 2) {
        throw JpegError(ErrorKind::truncated,
                        "entropy data too short for " + std::to_string(block_count) + " blocks", payload.size());
    }
    ScanDecoder decoder(payload, dc_table, ac_table);
    std::vector<ZigzagVector> blocks;
    blocks.reserve(block_count);
    for (std::size_t i = 0; i < block_count; ++i) {
        blocks.push_back(decoder.decode_block());
    }
    decoder.finish();
    return blocks;
}

struct SymbolStatistics {
    SymbolFrequencies dc;
    SymbolFrequencies ac;
};

/// Symbol counts a ScanEncoder would emit for these blocks.
inline SymbolStatistics collect_statistics(std::span<const ZigzagVector> blocks) {
    SymbolStatistics stats;
    int predictor = 0;
    for (const auto& block : blocks) {
        ++stats.dc[static_cast<std::uint8_t>(magnitude_category(block[0] - predictor))];
        predictor = block[0];
        for (const auto& symbol : run_length_symbols(block.ac())) {
            ++stats.ac[symbol.code()];
        }
    }
    return stats;
}

}  // namespace grayjpeg
