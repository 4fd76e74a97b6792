#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grayjpeg/block.hpp"
#include "grayjpeg/container.hpp"
#include "grayjpeg/entropy.hpp"
#include "grayjpeg/error.hpp"
#include "grayjpeg/huffman.hpp"
#include "grayjpeg/quantization.hpp"
#include "grayjpeg/scan.hpp"
#include "grayjpeg/transform.hpp"

namespace grayjpeg {

inline constexpr std::size_t kMaxDimension = 65535;

/// Row-major 8-bit grayscale image.
class ImageBuffer {
public:
    ImageBuffer() = default;

    ImageBuffer(std::size_t width, std::size_t height, std::uint8_t fill = 0) : width_(width), height_(height) {
        check_dimensions(width, height);
        samples_.assign(width * height, fill);
    }

    ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint8_t> samples)
        : width_(width), height_(height), samples_(std::move(samples)) {
        check_dimensions(width, height);
        if (samples_.size() != width * height) {
            throw std::invalid_argument("sample count does not match image dimensions");
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }

    std::uint8_t& operator()(std::size_t x, std::size_t y) { return samples_[y * width_ + x]; }
    std::uint8_t operator()(std::size_t x, std::size_t y) const { return samples_[y * width_ + x]; }

    std::span<const std::uint8_t> samples() const noexcept { return samples_; }
    std::span<std::uint8_t> samples() noexcept { return samples_; }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    static void check_dimensions(std::size_t width, std::size_t height) {
        if (width == 0 || height == 0 || width > kMaxDimension || height > kMaxDimension) {
            throw std::invalid_argument("image dimensions must be within 1..65535, got " + std::to_string(width) +
                                        "x" + std::to_string(height));
        }
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> samples_;
};

struct EncodeSettings {
    int quality = 75;
    bool optimize_huffman = false;
};

inline std::size_t blocks_across(std::size_t pixels) { return (pixels + kBlockSide - 1) / kBlockSide; }

/// Level-shifted 8x8 tile at block (bx, by); samples past the right or
/// bottom edge replicate the last column or row.
inline SampleBlock extract_block(const ImageBuffer& image, std::size_t bx, std::size_t by) {
    SampleBlock block;
    for (std::size_t r = 0; r < kBlockSide; ++r) {
        const std::size_t y = std::min(by * kBlockSide + r, image.height() - 1);
        for (std::size_t c = 0; c < kBlockSide; ++c) {
            const std::size_t x = std::min(bx * kBlockSide + c, image.width() - 1);
            block(r, c) = static_cast<int>(image(x, y)) - 128;
        }
    }
    return block;
}

/// FDCT + quantization of every block in raster order.
inline std::vector<ZigzagVector> quantize_image(const ImageBuffer& image, const QuantizationTable& table) {
    const std::size_t cols = blocks_across(image.width());
    const std::size_t rows = blocks_across(image.height());
    std::vector<ZigzagVector> blocks;
    blocks.reserve(cols * rows);
    for (std::size_t by = 0; by < rows; ++by) {
        for (std::size_t bx = 0; bx < cols; ++bx) {
            blocks.push_back(zigzag_scan(quantize(fdct_2d(extract_block(image, bx, by)), table)));
        }
    }
    return blocks;
}

inline std::vector<std::uint8_t> encode_image(const ImageBuffer& image, const EncodeSettings& settings) {
    if (image.width() == 0 || image.height() == 0) {
        throw std::invalid_argument("cannot encode an empty image");
    }
    const QuantizationTable table = scale_table(default_luminance_table(), settings.quality);
    const auto blocks = quantize_image(image, table);

    StreamContents contents;
    contents.frame.width = static_cast<std::uint16_t>(image.width());
    contents.frame.height = static_cast<std::uint16_t>(image.height());
    contents.quant_table = table;
    if (settings.optimize_huffman) {
        const auto stats = collect_statistics(blocks);
        contents.dc_table = build_huffman_table(stats.dc, CodeSpace::reserve_all_ones);
        contents.ac_table = build_huffman_table(stats.ac, CodeSpace::reserve_all_ones);
    } else {
        contents.dc_table = standard_dc_luminance();
        contents.ac_table = standard_ac_luminance();
    }
    contents.payload = huffman_encode(blocks, contents.dc_table, contents.ac_table);
    return write_stream(contents);
}

/// Entropy-decodes a parsed document into zig-zag level vectors; errors carry file offsets.
inline std::vector<ZigzagVector> decode_levels(const JpegDocument& doc) {
    const std::size_t count = blocks_across(doc.frame.width) * blocks_across(doc.frame.height);
    try {
        return huffman_decode(doc.payload, doc.dc_table(), doc.ac_table(), count);
    } catch (const JpegError& e) {
        if (e.offset()) {
            throw e.with_offset(doc.file_offset(*e.offset()));
        }
        throw;
    }
}

/// Dequantize, inverse transform, shift by +128, round half away from zero, clamp.
inline ImageBuffer reconstruct_image(std::size_t width, std::size_t height, std::span<const ZigzagVector> blocks,
                                     const QuantizationTable& table) {
    const std::size_t cols = blocks_across(width);
    if (blocks.size() != cols * blocks_across(height)) {
        throw std::invalid_argument("block count does not match image dimensions");
    }
    ImageBuffer image(width, height);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::size_t bx = i % cols;
        const std::size_t by = i / cols;
        const RealBlock spatial = idct_2d(dequantize(inverse_zigzag(blocks[i]), table));
        for (std::size_t r = 0; r < kBlockSide; ++r) {
            const std::size_t y = by * kBlockSide + r;
            if (y >= height) {
                break;
            }
            for (std::size_t c = 0; c < kBlockSide; ++c) {
                const std::size_t x = bx * kBlockSide + c;
                if (x >= width) {
                    break;
                }
                const int value = round_half_away(std::clamp(spatial(r, c) + 128.0, -1.0, 256.0));
                image(x, y) = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
            }
        }
    }
    return image;
}

inline ImageBuffer decode_image(std::span<const std::uint8_t> stream) {
    const JpegDocument doc = parse_stream(stream);
    const auto blocks = decode_levels(doc);
    return reconstruct_image(doc.frame.width, doc.frame.height, blocks, doc.quant_table());
}

inline double mean_squared_error(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("images differ in dimensions");
    }
    if (a.size() == 0) {
        throw std::invalid_argument("images are empty");
    }
    double sum = 0.0;
    const auto sa = a.samples();
    const auto sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double d = static_cast<double>(sa[i]) - static_cast<double>(sb[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(sa.size());
}

/// 10 log10(255^2 / MSE) in dB; +infinity for identical images.
inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    const double mse = mean_squared_error(a, b);
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

inline double compression_ratio(const ImageBuffer& original, std::span<const std::uint8_t> encoded) {
    if (encoded.empty()) {
        throw std::invalid_argument("encoded stream is empty");
    }
    return static_cast<double>(original.width() * original.height()) / static_cast<double>(encoded.size());
}

}  // namespace grayjpeg
