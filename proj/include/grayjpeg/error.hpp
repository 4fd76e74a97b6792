#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grayjpeg {

enum class ErrorKind {
    not_a_jpeg,
    unsupported_feature,
    truncated,
    corrupt_stream,
    missing_table,
    serialization,
    coding,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::not_a_jpeg: return "not a JPEG";
    case ErrorKind::unsupported_feature: return "unsupported feature";
    case ErrorKind::truncated: return "truncated stream";
    case ErrorKind::corrupt_stream: return "corrupt stream";
    case ErrorKind::missing_table: return "missing table";
    case ErrorKind::serialization: return "serialization error";
    case ErrorKind::coding: return "coding error";
    }
    return "error";
}

/// Typed failure raised by the bitstream layers (entropy coder, container, codec).
/// Argument-validation failures use std::invalid_argument instead.
class JpegError : public std::runtime_error {
public:
    JpegError(ErrorKind kind, const std::string& detail, std::optional<std::size_t> offset = std::nullopt)
        : std::runtime_error(format(kind, detail, offset)), kind_(kind), detail_(detail), offset_(offset) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    std::optional<std::size_t> offset() const noexcept { return offset_; }

    JpegError with_offset(std::size_t offset) const { return JpegError(kind_, detail_, offset); }

private:
    static std::string format(ErrorKind kind, const std::string& detail, std::optional<std::size_t> offset) {
        std::string msg(to_string(kind));
        if (!detail.empty()) {
            msg += ": ";
            msg += detail;
        }
        if (offset) {
            msg += " (at byte offset " + std::to_string(*offset) + ")";
        }
        return msg;
    }

    ErrorKind kind_;
    std::string detail_;
    std::optional<std::size_t> offset_;
};

}  // namespace grayjpeg
