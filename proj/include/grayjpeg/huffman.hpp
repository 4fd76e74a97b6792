#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grayjpeg/bitio.hpp"
#include "grayjpeg/error.hpp"

namespace grayjpeg {

inline constexpr int kMaxCodeLength = 16;

/// Canonical Huffman table as carried in a DHT segment: counts[i] codes of
/// length i+1, followed by the symbols in code order.
struct HuffmanTable {
    std::array<std::uint8_t, kMaxCodeLength> counts{};
    std::vector<std::uint8_t> symbols;

    friend bool operator==(const HuffmanTable&, const HuffmanTable&) = default;

    /// Empty string when the table is usable; otherwise the reason it is not.
    std::string validation_error() const {
        const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
        if (total != symbols.size()) {
            return "code-length counts do not match the symbol count";
        }
        if (total == 0) {
            return "table defines no codes";
        }
        if (total > 256) {
            return "more than 256 symbols";
        }
        // Kraft sum scaled by 2^16.
        std::uint32_t kraft = 0;
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            kraft += static_cast<std::uint32_t>(counts[len - 1]) << (kMaxCodeLength - len);
        }
        if (kraft > (1u << kMaxCodeLength)) {
            return "code lengths violate the Kraft inequality";
        }
        if (counts[kMaxCodeLength - 1] > 0 && kraft == (1u << kMaxCodeLength)) {
            return "table assigns the reserved all-ones 16-bit code";
        }
        std::array<bool, 256> seen{};
        for (auto s : symbols) {
            if (seen[s]) {
                return "duplicate symbol " + std::to_string(s);
            }
            seen[s] = true;
        }
        return {};
    }

    void validate() const {
        if (auto err = validation_error(); !err.empty()) {
            throw std::invalid_argument("invalid Huffman table: " + err);
        }
    }

    /// Code length for every symbol of the table, in symbol-list order.
    std::vector<int> lengths() const {
        std::vector<int> out;
        out.reserve(symbols.size());
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            for (int i = 0; i < counts[len - 1]; ++i) {
                out.push_back(len);
            }
        }
        return out;
    }

    /// Canonical code values, in symbol-list order.
    std::vector<std::uint16_t> codes() const {
        std::vector<std::uint16_t> out;
        out.reserve(symbols.size());
        std::uint32_t code = 0;
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            for (int i = 0; i < counts[len - 1]; ++i) {
                out.push_back(static_cast<std::uint16_t>(code++));
            }
            code <<= 1;
        }
        return out;
    }
};

/// Recommended DC luminance table.
inline const HuffmanTable& standard_dc_luminance() {
    static const HuffmanTable table{
        {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
        {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},
    };
    return table;
}

/// Recommended AC luminance table.
inline const HuffmanTable& standard_ac_luminance() {
    static const HuffmanTable table{
        {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d},
        {0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
         0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0,
         0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
         0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
         0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
         0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
         0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7,
         0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5,
         0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
         0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8,
         0xf9, 0xfa},
    };
    return table;
}

using SymbolFrequencies = std::map<std::uint8_t, std::uint64_t>;

namespace detail {

// Depth of every leaf in a Huffman tree over the given weights. Ties merge
// the node created earliest first, so results are deterministic.
inline std::vector<int> huffman_depths(const std::vector<std::uint64_t>& weights) {
    const std::size_t leaves = weights.size();
    if (leaves == 1) {
        return {1};
    }
    struct Node {
        std::uint64_t weight;
        std::size_t order;
    };
    auto heavier = [](const Node& a, const Node& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.order > b.order;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(heavier)> queue(heavier);
    std::vector<std::size_t> parent(2 * leaves - 1, 0);
    for (std::size_t i = 0; i < leaves; ++i) {
        queue.push({weights[i], i});
    }
    std::size_t next = leaves;
    while (queue.size() > 1) {
        const Node a = queue.top();
        queue.pop();
        const Node b = queue.top();
        queue.pop();
        parent[a.order] = next;
        parent[b.order] = next;
        queue.push({a.weight + b.weight, next});
        ++next;
    }
    const std::size_t root = next - 1;
    std::vector<int> depth(2 * leaves - 1, 0);
    for (std::size_t n = root; n-- > 0;) {
        depth[n] = depth[parent[n]] + 1;
    }
    depth.resize(leaves);
    return depth;
}

}  // namespace detail

/// How much of the code space a built table may use. `full` only keeps the
/// all-ones 16-bit code free; `reserve_all_ones` keeps the all-ones code of
/// every length free, which common decoders such as libjpeg require.
enum class CodeSpace { full, reserve_all_ones };

/// Builds a length-limited canonical Huffman table from symbol statistics.
/// Longer codes never go to more frequent symbols, and the all-ones 16-bit
/// code stays unassigned.
inline HuffmanTable build_huffman_table(const SymbolFrequencies& frequencies, CodeSpace space = CodeSpace::full) {
    struct Entry {
        std::uint8_t symbol;
        std::uint64_t count;
    };
    std::vector<Entry> entries;
    for (const auto& [symbol, count] : frequencies) {
        if (count > 0) {
            entries.push_back({symbol, count});
        }
    }
    if (entries.empty()) {
        throw std::invalid_argument("build_huffman_table requires at least one symbol with nonzero count");
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.count > b.count; });

    std::vector<std::uint64_t> weights;
    for (const auto& e : entries) {
        weights.push_back(e.count);
    }
    // A least-frequent pseudo-symbol holds the all-ones code point; its code
    // is dropped from the longest length once lengths are limited.
    const bool reserve = space == CodeSpace::reserve_all_ones;
    if (reserve) {
        weights.push_back(1);
    }
    const auto depths = detail::huffman_depths(weights);
    const int max_depth = *std::max_element(depths.begin(), depths.end());

    std::vector<int> bits(static_cast<std::size_t>(std::max(max_depth, kMaxCodeLength)) + 1, 0);
    for (int d : depths) {
        ++bits[static_cast<std::size_t>(d)];
    }

    // Fold codes deeper than 16: remove a sibling pair at depth i, hang one
    // of them under the prefix of the pair, and split a shorter leaf.
    for (int i = max_depth; i > kMaxCodeLength; --i) {
        while (bits[i] > 0) {
            int j = i - 2;
            while (bits[j] == 0) {
                --j;
            }
            bits[i] -= 2;
            bits[i - 1] += 1;
            bits[j + 1] += 2;
            bits[j] -= 1;
        }
    }

    auto kraft_full = [&] {
        std::uint64_t sum = 0;
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            sum += static_cast<std::uint64_t>(bits[len]) << (kMaxCodeLength - len);
        }
        return sum == (1ull << kMaxCodeLength);
    };
    if (reserve) {
        int i = kMaxCodeLength;
        while (bits[i] == 0) {
            --i;
        }
        bits[i] -= 1;
    } else if (bits[kMaxCodeLength] > 0 && kraft_full()) {
        int i = kMaxCodeLength - 1;
        while (bits[i] == 0) {
            --i;
        }
        bits[i] -= 1;
        bits[i + 1] += 1;
    }
    // 256 equal-length codes do not fit the one-byte DHT count.
    for (int len = 1; len < kMaxCodeLength; ++len) {
        if (bits[len] > 255) {
            bits[len] -= 1;
            bits[len + 1] += 1;
        }
    }

    // Most frequent symbols take the shortest lengths; within a length the
    // symbols are listed by ascending value.
    HuffmanTable table;
    std::size_t cursor = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        table.counts[len - 1] = static_cast<std::uint8_t>(bits[len]);
        std::vector<std::uint8_t> group;
        for (int k = 0; k < bits[len]; ++k) {
            group.push_back(entries[cursor++].symbol);
        }
        std::sort(group.begin(), group.end());
        table.symbols.insert(table.symbols.end(), group.begin(), group.end());
    }
    return table;
}

/// Symbol -> (code, length) lookup for the encoder.
class HuffmanEncoder {
public:
    explicit HuffmanEncoder(const HuffmanTable& table) {
        table.validate();
        const auto lengths = table.lengths();
        const auto codes = table.codes();
        for (std::size_t i = 0; i < table.symbols.size(); ++i) {
            codes_[table.symbols[i]] = codes[i];
            lengths_[table.symbols[i]] = static_cast<std::uint8_t>(lengths[i]);
        }
    }

    bool contains(std::uint8_t symbol) const noexcept { return lengths_[symbol] != 0; }
    int length(std::uint8_t symbol) const noexcept { return lengths_[symbol]; }
    std::uint16_t code(std::uint8_t symbol) const noexcept { return codes_[symbol]; }

    void encode(std::uint8_t symbol, BitWriter& out) const {
        if (!contains(symbol)) {
            throw JpegError(ErrorKind::coding, "symbol 0x" + hex(symbol) + " has no code in the Huffman table");
        }
        out.write(codes_[symbol], lengths_[symbol]);
    }

private:
    static std::string hex(std::uint8_t v) {
        static constexpr char digits[] = "0123456789abcdef";
        return {digits[v >> 4], digits[v & 15]};
    }

    std::array<std::uint16_t, 256> codes_{};
    std::array<std::uint8_t, 256> lengths_{};
};

/// Bit-serial canonical decoder (first-code / max-code per length).
class HuffmanDecoder {
public:
    explicit HuffmanDecoder(const HuffmanTable& table) : symbols_(table.symbols) {
        if (auto err = table.validation_error(); !err.empty()) {
            throw JpegError(ErrorKind::corrupt_stream, "invalid Huffman table: " + err);
        }
        std::int32_t code = 0;
        std::int32_t index = 0;
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            const int count = table.counts[len - 1];
            first_index_[len] = index;
            first_code_[len] = code;
            max_code_[len] = count > 0 ? code + count - 1 : -1;
            code = (code + count) << 1;
            index += count;
        }
    }

    std::uint8_t decode(BitReader& in) const {
        std::int32_t code = 0;
        for (int len = 1; len <= kMaxCodeLength; ++len) {
            code = (code << 1) | in.read_bit();
            if (code <= max_code_[len]) {
                return symbols_[static_cast<std::size_t>(first_index_[len] + code - first_code_[len])];
            }
        }
        throw JpegError(ErrorKind::corrupt_stream, "bit pattern matches no Huffman code", in.byte_position());
    }

private:
    std::vector<std::uint8_t> symbols_;
    std::array<std::int32_t, kMaxCodeLength + 1> first_index_{};
    std::array<std::int32_t, kMaxCodeLength + 1> first_code_{};
    std::array<std::int32_t, kMaxCodeLength + 1> max_code_{};
};

}  // namespace grayjpeg
