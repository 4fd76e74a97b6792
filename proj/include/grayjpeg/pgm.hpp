#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grayjpeg/codec.hpp"

namespace grayjpeg {

class PgmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string pgm_token(const std::vector<std::uint8_t>& data, std::size_t& pos) {
    for (;;) {
        while (pos < data.size() && std::isspace(data[pos])) {
            ++pos;
        }
        if (pos < data.size() && data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n' && data[pos] != '\r') {
                ++pos;
            }
            continue;
        }
        break;
    }
    std::string token;
    while (pos < data.size() && !std::isspace(data[pos]) && data[pos] != '#') {
        token.push_back(static_cast<char>(data[pos++]));
    }
    return token;
}

inline std::size_t pgm_number(const std::vector<std::uint8_t>& data, std::size_t& pos, const char* what) {
    const std::string token = pgm_token(data, pos);
    if (token.empty() || token.size() > 9 || token.find_first_not_of("0123456789") != std::string::npos) {
        throw PgmError(std::string("malformed PGM header: bad ") + what);
    }
    return std::stoul(token);
}

}  // namespace detail

/// Parses a binary (P5) PGM with maxval 255.
inline ImageBuffer parse_pgm(const std::vector<std::uint8_t>& data) {
    std::size_t pos = 0;
    const std::string magic = detail::pgm_token(data, pos);
    if (magic == "P2") {
        throw PgmError("ASCII PGM (P2) is not supported; convert to binary P5");
    }
    if (magic != "P5") {
        throw PgmError("not a binary PGM (expected magic P5)");
    }
    const std::size_t width = detail::pgm_number(data, pos, "width");
    const std::size_t height = detail::pgm_number(data, pos, "height");
    const std::size_t maxval = detail::pgm_number(data, pos, "maxval");
    if (maxval != 255) {
        throw PgmError("PGM maxval must be 255, got " + std::to_string(maxval));
    }
    if (width == 0 || height == 0 || width > kMaxDimension || height > kMaxDimension) {
        throw PgmError("PGM dimensions must be within 1..65535");
    }
    if (pos >= data.size() || !std::isspace(data[pos])) {
        throw PgmError("malformed PGM header: missing separator before pixel data");
    }
    ++pos;
    if (data.size() - pos < width * height) {
        throw PgmError("PGM pixel data is truncated");
    }
    std::vector<std::uint8_t> samples(data.begin() + static_cast<std::ptrdiff_t>(pos),
                                      data.begin() + static_cast<std::ptrdiff_t>(pos + width * height));
    return ImageBuffer(width, height, std::move(samples));
}

inline std::vector<std::uint8_t> serialize_pgm(const ImageBuffer& image) {
    const std::string header = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.samples().begin(), image.samples().end());
    return out;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot create " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

inline ImageBuffer read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

inline void write_pgm(const std::filesystem::path& path, const ImageBuffer& image) {
    write_file(path, serialize_pgm(image));
}

}  // namespace grayjpeg
