#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grayjpeg/error.hpp"
#include "grayjpeg/huffman.hpp"
#include "grayjpeg/quantization.hpp"

namespace grayjpeg {

namespace marker {
inline constexpr std::uint8_t sof0 = 0xC0;
inline constexpr std::uint8_t dht = 0xC4;
inline constexpr std::uint8_t soi = 0xD8;
inline constexpr std::uint8_t eoi = 0xD9;
inline constexpr std::uint8_t sos = 0xDA;
inline constexpr std::uint8_t dqt = 0xDB;
inline constexpr std::uint8_t dnl = 0xDC;
inline constexpr std::uint8_t dri = 0xDD;
inline constexpr std::uint8_t app0 = 0xE0;
inline constexpr std::uint8_t com = 0xFE;
}  // namespace marker

/// Short mnemonic for a marker code ("SOF0", "APP1", ...).
inline std::string marker_name(std::uint8_t code) {
    static const char* const sof_names[] = {"SOF0", "SOF1", "SOF2",  "SOF3",  "DHT",   "SOF5",  "SOF6",  "SOF7",
                                            "JPG",  "SOF9", "SOF10", "SOF11", "DAC",   "SOF13", "SOF14", "SOF15"};
    if (code >= 0xC0 && code <= 0xCF) {
        return sof_names[code - 0xC0];
    }
    if (code >= 0xD0 && code <= 0xD7) {
        return "RST" + std::to_string(code - 0xD0);
    }
    if (code >= 0xE0 && code <= 0xEF) {
        return "APP" + std::to_string(code - 0xE0);
    }
    switch (code) {
    case 0xD8: return "SOI";
    case 0xD9: return "EOI";
    case 0xDA: return "SOS";
    case 0xDB: return "DQT";
    case 0xDC: return "DNL";
    case 0xDD: return "DRI";
    case 0xDE: return "DHP";
    case 0xDF: return "EXP";
    case 0xFE: return "COM";
    default: break;
    }
    static constexpr char digits[] = "0123456789ABCDEF";
    return std::string("0xFF") + digits[code >> 4] + digits[code & 15];
}

inline constexpr std::size_t kMaxSegmentPayload = 65533;

struct FrameHeader {
    std::uint8_t precision = 8;
    std::uint16_t height = 0;
    std::uint16_t width = 0;
    std::uint8_t component_id = 1;
    std::uint8_t h_sampling = 1;
    std::uint8_t v_sampling = 1;
    std::uint8_t quant_table_id = 0;

    friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

/// Everything the writer serializes for a single-component baseline image.
struct StreamContents {
    FrameHeader frame;
    QuantizationTable quant_table;
    HuffmanTable dc_table;
    HuffmanTable ac_table;
    std::vector<std::uint8_t> payload;  // unstuffed entropy data
};

struct SegmentInfo {
    std::uint8_t marker = 0;
    std::size_t offset = 0;  // file offset of the 0xFF
    std::size_t length = 0;  // length field value; 0 for standalone markers
};

struct ScanHeader {
    std::uint8_t component_id = 1;
    std::uint8_t dc_table_id = 0;
    std::uint8_t ac_table_id = 0;
};

/// Parsed baseline grayscale stream.
struct JpegDocument {
    FrameHeader frame;
    ScanHeader scan;
    std::array<std::optional<QuantizationTable>, 4> quant_tables;
    std::array<std::optional<HuffmanTable>, 4> dc_tables;
    std::array<std::optional<HuffmanTable>, 4> ac_tables;
    std::vector<std::uint8_t> payload;  // unstuffed entropy data
    std::size_t payload_offset = 0;     // file offset of the first entropy byte
    std::vector<std::size_t> stuffed_at;  // payload indices whose 0xFF was followed by a stuffed 0x00
    std::vector<SegmentInfo> segments;

    const QuantizationTable& quant_table() const { return *quant_tables[frame.quant_table_id]; }
    const HuffmanTable& dc_table() const { return *dc_tables[scan.dc_table_id]; }
    const HuffmanTable& ac_table() const { return *ac_tables[scan.ac_table_id]; }

    /// Maps an index into the unstuffed payload back to a file offset.
    std::size_t file_offset(std::size_t payload_index) const {
        const auto stuffed_before = std::lower_bound(stuffed_at.begin(), stuffed_at.end(), payload_index) - stuffed_at.begin();
        return payload_offset + payload_index + static_cast<std::size_t>(stuffed_before);
    }
};

/// Inserts 0x00 after every 0xFF.
inline std::vector<std::uint8_t> stuff_bytes(std::span<const std::uint8_t> raw) {
    std::vector<std::uint8_t> out;
    out.reserve(raw.size() + raw.size() / 64);
    for (auto b : raw) {
        out.push_back(b);
        if (b == 0xFF) {
            out.push_back(0x00);
        }
    }
    return out;
}

/// Drops the 0x00 following each 0xFF. Input must not contain markers.
inline std::vector<std::uint8_t> unstuff_bytes(std::span<const std::uint8_t> stuffed) {
    std::vector<std::uint8_t> out;
    out.reserve(stuffed.size());
    for (std::size_t i = 0; i < stuffed.size(); ++i) {
        out.push_back(stuffed[i]);
        if (stuffed[i] == 0xFF) {
            if (i + 1 >= stuffed.size() || stuffed[i + 1] != 0x00) {
                throw JpegError(ErrorKind::corrupt_stream, "0xFF in entropy data is not followed by a stuffed 0x00", i);
            }
            ++i;
        }
    }
    return out;
}

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::size_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

}  // namespace detail

/// Appends marker + length-prefixed payload.
inline void write_segment(std::vector<std::uint8_t>& out, std::uint8_t code, std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxSegmentPayload) {
        throw JpegError(ErrorKind::serialization,
                        marker_name(code) + " payload of " + std::to_string(payload.size()) + " bytes exceeds 65533");
    }
    out.push_back(0xFF);
    out.push_back(code);
    detail::put_u16(out, payload.size() + 2);
    out.insert(out.end(), payload.begin(), payload.end());
}

inline std::vector<std::uint8_t> write_stream(const StreamContents& contents) {
    const FrameHeader& frame = contents.frame;
    if (frame.precision != 8 || frame.width == 0 || frame.height == 0) {
        throw JpegError(ErrorKind::serialization, "frame header must be 8-bit with nonzero dimensions");
    }
    contents.dc_table.validate();
    contents.ac_table.validate();

    std::vector<std::uint8_t> out{0xFF, marker::soi};

    const std::uint8_t jfif[] = {'J', 'F', 'I', 'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0};
    write_segment(out, marker::app0, jfif);

    std::vector<std::uint8_t> dqt{static_cast<std::uint8_t>(frame.quant_table_id & 0x0F)};
    for (auto q : contents.quant_table.zigzag_values()) {
        dqt.push_back(static_cast<std::uint8_t>(q));
    }
    write_segment(out, marker::dqt, dqt);

    std::vector<std::uint8_t> sof{frame.precision};
    detail::put_u16(sof, frame.height);
    detail::put_u16(sof, frame.width);
    sof.push_back(1);
    sof.push_back(frame.component_id);
    sof.push_back(static_cast<std::uint8_t>((frame.h_sampling << 4) | frame.v_sampling));
    sof.push_back(frame.quant_table_id);
    write_segment(out, marker::sof0, sof);

    auto write_dht = [&](std::uint8_t class_and_id, const HuffmanTable& table) {
        std::vector<std::uint8_t> dht{class_and_id};
        dht.insert(dht.end(), table.counts.begin(), table.counts.end());
        dht.insert(dht.end(), table.symbols.begin(), table.symbols.end());
        write_segment(out, marker::dht, dht);
    };
    write_dht(0x00, contents.dc_table);
    write_dht(0x10, contents.ac_table);

    const std::uint8_t sos[] = {1, frame.component_id, 0x00, 0, 63, 0};
    write_segment(out, marker::sos, sos);

    const auto stuffed = stuff_bytes(contents.payload);
    out.insert(out.end(), stuffed.begin(), stuffed.end());
    out.push_back(0xFF);
    out.push_back(marker::eoi);
    return out;
}

namespace detail {

class StreamParser {
public:
    explicit StreamParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    JpegDocument run() {
        if (bytes_.size() < 2 || bytes_[0] != 0xFF || bytes_[1] != marker::soi) {
            throw JpegError(ErrorKind::not_a_jpeg, "stream does not start with SOI (0xFFD8)", 0);
        }
        doc_.segments.push_back({marker::soi, 0, 0});
        pos_ = 2;
        for (;;) {
            const std::size_t at = pos_;
            const std::uint8_t code = next_marker();
            if (code == marker::eoi) {
                doc_.segments.push_back({code, at, 0});
                break;
            }
            if (code == marker::soi || (code >= 0xD0 && code <= 0xD7) || code == 0x01) {
                if (code == 0x01) {
                    doc_.segments.push_back({code, at, 0});
                    continue;
                }
                throw JpegError(ErrorKind::corrupt_stream, "unexpected " + marker_name(code) + " marker", at);
            }
            if (pos_ + 2 > bytes_.size()) {
                throw JpegError(ErrorKind::truncated, marker_name(code) + " segment has no length field", at);
            }
            const std::size_t length = (std::size_t{bytes_[pos_]} << 8) | bytes_[pos_ + 1];
            if (length < 2) {
                throw JpegError(ErrorKind::corrupt_stream, marker_name(code) + " length field below 2", at);
            }
            if (pos_ + length > bytes_.size()) {
                throw JpegError(ErrorKind::truncated, marker_name(code) + " segment length overruns the stream", at);
            }
            doc_.segments.push_back({code, at, length});
            const auto body = bytes_.subspan(pos_ + 2, length - 2);
            pos_ += length;
            handle_segment(code, body, at);
        }
        if (!scan_seen_) {
            throw JpegError(ErrorKind::corrupt_stream, "stream contains no scan", pos_);
        }
        return std::move(doc_);
    }

private:
    std::uint8_t next_marker() {
        if (pos_ >= bytes_.size()) {
            throw JpegError(ErrorKind::truncated, "stream ends before EOI", pos_);
        }
        if (bytes_[pos_] != 0xFF) {
            throw JpegError(ErrorKind::corrupt_stream, "expected a marker", pos_);
        }
        while (pos_ < bytes_.size() && bytes_[pos_] == 0xFF) {
            ++pos_;
        }
        if (pos_ >= bytes_.size()) {
            throw JpegError(ErrorKind::truncated, "stream ends before EOI", pos_);
        }
        const std::uint8_t code = bytes_[pos_++];
        if (code == 0x00) {
            throw JpegError(ErrorKind::corrupt_stream, "stuffed zero outside entropy data", pos_ - 2);
        }
        return code;
    }

    [[noreturn]] static void unsupported(const std::string& what, std::size_t at) {
        throw JpegError(ErrorKind::unsupported_feature, what, at);
    }

    void handle_segment(std::uint8_t code, std::span<const std::uint8_t> body, std::size_t at) {
        switch (code) {
        case marker::sof0: parse_frame(body, at); return;
        case 0xC1: unsupported("extended sequential (SOF1) frames", at);
        case 0xC2: unsupported("progressive (SOF2) JPEG", at);
        case 0xC3: unsupported("lossless (SOF3) JPEG", at);
        case 0xC5:
        case 0xC6:
        case 0xC7:
        case 0xDE:
        case 0xDF: unsupported("hierarchical JPEG (" + marker_name(code) + ")", at);
        case 0xC8: unsupported("reserved JPG extension marker", at);
        case 0xC9:
        case 0xCA:
        case 0xCB:
        case 0xCC:
        case 0xCD:
        case 0xCE:
        case 0xCF: unsupported("arithmetic coding (" + marker_name(code) + ")", at);
        case marker::dht: parse_huffman(body, at); return;
        case marker::dqt: parse_quant(body, at); return;
        case marker::dri: {
            if (body.size() != 2) {
                throw JpegError(ErrorKind::corrupt_stream, "DRI segment must hold 2 bytes", at);
            }
            if (body[0] != 0 || body[1] != 0) {
                unsupported("restart intervals", at);
            }
            return;
        }
        case marker::dnl: unsupported("DNL-defined image height", at);
        case marker::sos: parse_scan(body, at); return;
        default: return;  // APPn, COM and other non-essential segments
        }
    }

    void parse_frame(std::span<const std::uint8_t> body, std::size_t at) {
        if (frame_seen_) {
            throw JpegError(ErrorKind::corrupt_stream, "more than one frame header", at);
        }
        if (body.size() < 6) {
            throw JpegError(ErrorKind::corrupt_stream, "SOF0 segment too short", at);
        }
        const std::uint8_t precision = body[0];
        const std::uint16_t height = static_cast<std::uint16_t>((body[1] << 8) | body[2]);
        const std::uint16_t width = static_cast<std::uint16_t>((body[3] << 8) | body[4]);
        const std::uint8_t components = body[5];
        if (body.size() != 6 + 3 * std::size_t{components}) {
            throw JpegError(ErrorKind::corrupt_stream, "SOF0 length does not match its component count", at);
        }
        if (precision != 8) {
            unsupported(std::to_string(precision) + "-bit sample precision", at);
        }
        if (components != 1) {
            unsupported("multi-component (color) images with " + std::to_string(components) + " components", at);
        }
        if (height == 0) {
            unsupported("DNL-defined image height", at);
        }
        if (width == 0) {
            throw JpegError(ErrorKind::corrupt_stream, "frame width is zero", at);
        }
        const std::uint8_t h = body[7] >> 4;
        const std::uint8_t v = body[7] & 15;
        if (h < 1 || h > 4 || v < 1 || v > 4 || body[8] > 3) {
            throw JpegError(ErrorKind::corrupt_stream, "invalid component sampling or table id", at);
        }
        doc_.frame = {precision, height, width, body[6], h, v, body[8]};
        frame_seen_ = true;
    }

    void parse_quant(std::span<const std::uint8_t> body, std::size_t at) {
        std::size_t i = 0;
        while (i < body.size()) {
            const int precision = body[i] >> 4;
            const int id = body[i] & 15;
            if (precision == 1) {
                unsupported("16-bit quantization tables", at);
            }
            if (precision != 0 || id > 3) {
                throw JpegError(ErrorKind::corrupt_stream, "invalid DQT precision or table id", at);
            }
            if (i + 1 + kBlockSize > body.size()) {
                throw JpegError(ErrorKind::corrupt_stream, "DQT segment too short", at);
            }
            std::array<int, kBlockSize> quanta{};
            for (std::size_t k = 0; k < kBlockSize; ++k) {
                quanta[k] = body[i + 1 + k];
                if (quanta[k] == 0) {
                    throw JpegError(ErrorKind::corrupt_stream, "quantization table holds a zero quantum", at);
                }
            }
            doc_.quant_tables[id] = QuantizationTable::from_zigzag(quanta);
            i += 1 + kBlockSize;
        }
    }

    void parse_huffman(std::span<const std::uint8_t> body, std::size_t at) {
        std::size_t i = 0;
        while (i < body.size()) {
            const int table_class = body[i] >> 4;
            const int id = body[i] & 15;
            if (table_class > 1 || id > 3) {
                throw JpegError(ErrorKind::corrupt_stream, "invalid DHT class or table id", at);
            }
            if (i + 1 + kMaxCodeLength > body.size()) {
                throw JpegError(ErrorKind::corrupt_stream, "DHT segment too short", at);
            }
            HuffmanTable table;
            std::size_t total = 0;
            for (int k = 0; k < kMaxCodeLength; ++k) {
                table.counts[k] = body[i + 1 + k];
                total += table.counts[k];
            }
            i += 1 + kMaxCodeLength;
            if (total > 256 || i + total > body.size()) {
                throw JpegError(ErrorKind::corrupt_stream, "DHT symbol list overruns the segment", at);
            }
            table.symbols.assign(body.begin() + static_cast<std::ptrdiff_t>(i),
                                 body.begin() + static_cast<std::ptrdiff_t>(i + total));
            i += total;
            if (auto err = table.validation_error(); !err.empty()) {
                throw JpegError(ErrorKind::corrupt_stream, "invalid Huffman table: " + err, at);
            }
            (table_class == 0 ? doc_.dc_tables : doc_.ac_tables)[id] = std::move(table);
        }
    }

    void parse_scan(std::span<const std::uint8_t> body, std::size_t at) {
        if (!frame_seen_) {
            throw JpegError(ErrorKind::corrupt_stream, "scan header before frame header", at);
        }
        if (scan_seen_) {
            unsupported("multiple scans", at);
        }
        if (body.empty() || body[0] != 1 || body.size() != 6) {
            throw JpegError(ErrorKind::corrupt_stream, "scan must select exactly the one frame component", at);
        }
        if (body[1] != doc_.frame.component_id) {
            throw JpegError(ErrorKind::corrupt_stream, "scan selects an unknown component", at);
        }
        const std::uint8_t dc_id = body[2] >> 4;
        const std::uint8_t ac_id = body[2] & 15;
        if (dc_id > 3 || ac_id > 3) {
            throw JpegError(ErrorKind::corrupt_stream, "invalid scan table selector", at);
        }
        if (body[3] != 0 || body[4] != 63 || body[5] != 0) {
            unsupported("spectral selection / successive approximation (progressive scan)", at);
        }
        if (!doc_.quant_tables[doc_.frame.quant_table_id]) {
            throw JpegError(ErrorKind::missing_table,
                            "quantization table " + std::to_string(doc_.frame.quant_table_id) + " not defined", at);
        }
        if (!doc_.dc_tables[dc_id]) {
            throw JpegError(ErrorKind::missing_table, "DC Huffman table " + std::to_string(dc_id) + " not defined", at);
        }
        if (!doc_.ac_tables[ac_id]) {
            throw JpegError(ErrorKind::missing_table, "AC Huffman table " + std::to_string(ac_id) + " not defined", at);
        }
        doc_.scan = {body[1], dc_id, ac_id};
        scan_seen_ = true;
        read_entropy_data();
    }

    void read_entropy_data() {
        doc_.payload_offset = pos_;
        auto& out = doc_.payload;
        while (pos_ < bytes_.size()) {
            const std::uint8_t b = bytes_[pos_];
            if (b != 0xFF) {
                out.push_back(b);
                ++pos_;
                continue;
            }
            if (pos_ + 1 >= bytes_.size()) {
                break;
            }
            const std::uint8_t next = bytes_[pos_ + 1];
            if (next == 0x00) {
                doc_.stuffed_at.push_back(out.size());
                out.push_back(0xFF);
                pos_ += 2;
                continue;
            }
            if (next >= 0xD0 && next <= 0xD7) {
                unsupported("restart markers", pos_);
            }
            return;  // marker (possibly after fill bytes) ends the entropy data
        }
        throw JpegError(ErrorKind::truncated, "entropy data runs to the end of the stream without EOI", bytes_.size());
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    JpegDocument doc_;
    bool frame_seen_ = false;
    bool scan_seen_ = false;
};

}  // namespace detail

/// Parses a baseline sequential single-component JFIF/JPEG stream.
inline JpegDocument parse_stream(std::span<const std::uint8_t> bytes) { return detail::StreamParser(bytes).run(); }

}  // namespace grayjpeg
