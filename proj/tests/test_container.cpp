#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "grayjpeg/codec.hpp"
#include "grayjpeg/container.hpp"
#include "grayjpeg/pgm.hpp"

using namespace grayjpeg;

namespace {

const std::string kFixtures = GRAYJPEG_FIXTURE_DIR;

StreamContents sample_contents() {
    StreamContents c;
    c.frame.width = 37;
    c.frame.height = 21;
    c.quant_table = scale_table(default_luminance_table(), 80);
    c.dc_table = standard_dc_luminance();
    c.ac_table = build_huffman_table({{0x00, 40}, {0x01, 12}, {0x11, 3}, {0xF0, 1}});
    c.payload = {0x12, 0xFF, 0x00, 0xFF, 0xFF, 0xD9, 0x7F};
    return c;
}

ErrorKind kind_of(const std::vector<std::uint8_t>& bytes) {
    try {
        parse_stream(bytes);
    } catch (const JpegError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "stream parsed without error";
    return ErrorKind::coding;
}

// Index of the first segment with the given marker in a stream we wrote.
std::size_t find_marker(const std::vector<std::uint8_t>& bytes, std::uint8_t code) {
    for (const auto& seg : parse_stream(bytes).segments) {
        if (seg.marker == code) {
            return seg.offset;
        }
    }
    return bytes.size();
}

}  // namespace

TEST(WriteStream, SegmentOrderAndFraming) {
    const auto bytes = write_stream(sample_contents());
    ASSERT_GE(bytes.size(), 4u);
    EXPECT_EQ(bytes[0], 0xFF);
    EXPECT_EQ(bytes[1], 0xD8);
    EXPECT_EQ(bytes[bytes.size() - 2], 0xFF);
    EXPECT_EQ(bytes.back(), 0xD9);

    std::vector<std::uint8_t> order;
    for (const auto& seg : parse_stream(bytes).segments) {
        order.push_back(seg.marker);
    }
    EXPECT_EQ(order, (std::vector<std::uint8_t>{0xD8, 0xE0, 0xDB, 0xC0, 0xC4, 0xC4, 0xDA, 0xD9}));

    // APP0 JFIF 1.01, no units, 1:1, no thumbnail
    const std::vector<std::uint8_t> app0(bytes.begin() + 2, bytes.begin() + 20);
    EXPECT_EQ(app0, (std::vector<std::uint8_t>{0xFF, 0xE0, 0, 16, 'J', 'F', 'I', 'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0}));
}

TEST(WriteStream, StuffsEntropyPayload) {
    const auto c = sample_contents();
    const auto bytes = write_stream(c);
    const std::size_t sos = find_marker(bytes, marker::sos);
    const std::size_t data = sos + 2 + 8;
    const std::vector<std::uint8_t> written(bytes.begin() + static_cast<std::ptrdiff_t>(data), bytes.end() - 2);
    EXPECT_EQ(written, (std::vector<std::uint8_t>{0x12, 0xFF, 0x00, 0x00, 0xFF, 0x00, 0xFF, 0x00, 0xD9, 0x7F}));
}

TEST(WriteStream, RoundTripThroughParser) {
    const auto c = sample_contents();
    const auto doc = parse_stream(write_stream(c));
    EXPECT_EQ(doc.frame, c.frame);
    EXPECT_EQ(doc.quant_table(), c.quant_table);
    EXPECT_EQ(doc.dc_table(), c.dc_table);
    EXPECT_EQ(doc.ac_table(), c.ac_table);
    EXPECT_EQ(doc.payload, c.payload);
    EXPECT_EQ(doc.stuffed_at, (std::vector<std::size_t>{1, 3, 4}));
}

TEST(WriteStream, OversizedSegmentIsSerializationError) {
    std::vector<std::uint8_t> out;
    const std::vector<std::uint8_t> big(65534, 0);
    try {
        write_segment(out, marker::com, big);
        FAIL();
    } catch (const JpegError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::serialization);
    }
    write_segment(out, marker::com, std::vector<std::uint8_t>(65533, 0));
    EXPECT_EQ(out[2], 0xFF);
    EXPECT_EQ(out[3], 0xFF);
}

TEST(Stuffing, InverseAndNoMarkerAliasing) {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> byte(0, 255);
    std::bernoulli_distribution ff(0.3);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::uint8_t> raw(static_cast<std::size_t>(t % 97));
        for (auto& b : raw) {
            b = ff(rng) ? 0xFF : static_cast<std::uint8_t>(byte(rng));
        }
        const auto stuffed = stuff_bytes(raw);
        ASSERT_EQ(unstuff_bytes(stuffed), raw);
        for (std::size_t i = 0; i + 1 < stuffed.size(); ++i) {
            if (stuffed[i] == 0xFF) {
                ASSERT_EQ(stuffed[i + 1], 0x00);
                ++i;
            }
        }
    }
    EXPECT_THROW(unstuff_bytes(std::vector<std::uint8_t>{0xFF, 0xD9}), JpegError);
}

TEST(ParseStream, NotAJpeg) {
    EXPECT_EQ(kind_of({0x00, 0x01}), ErrorKind::not_a_jpeg);
    EXPECT_EQ(kind_of({}), ErrorKind::not_a_jpeg);
    EXPECT_EQ(kind_of({0xFF}), ErrorKind::not_a_jpeg);
}

TEST(ParseStream, SkipsCommentSegments) {
    const auto image = read_pgm(kFixtures + "/camera.pgm");
    const auto bytes = encode_image(image, {60, false});
    auto with_comment = bytes;
    const std::string text = "inserted comment \xFF\xD9 with marker-like bytes";
    std::vector<std::uint8_t> com;
    write_segment(com, marker::com, std::vector<std::uint8_t>(text.begin(), text.end()));
    std::vector<std::uint8_t> app5;
    write_segment(app5, 0xE5, std::vector<std::uint8_t>{1, 2, 3});
    const auto pos = static_cast<std::ptrdiff_t>(find_marker(bytes, marker::sof0));
    with_comment.insert(with_comment.begin() + pos, app5.begin(), app5.end());
    with_comment.insert(with_comment.begin() + pos, com.begin(), com.end());
    EXPECT_EQ(decode_image(with_comment), decode_image(bytes));
}

TEST(ParseStream, RejectsNonBaselineFrames) {
    auto bytes = write_stream(sample_contents());
    bytes[find_marker(bytes, marker::sof0) + 1] = 0xC2;
    try {
        parse_stream(bytes);
        FAIL();
    } catch (const JpegError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_feature);
        EXPECT_NE(std::string(e.what()).find("progressive"), std::string::npos);
    }
    for (std::uint8_t code : {0xC1, 0xC3, 0xC9}) {
        bytes[find_marker(write_stream(sample_contents()), marker::sof0) + 1] = code;
        EXPECT_EQ(kind_of(bytes), ErrorKind::unsupported_feature);
    }
}

TEST(ParseStream, ExternalProgressiveAndColorAreUnsupported) {
    for (const char* name : {"/external_progressive.jpg", "/external_color.jpg"}) {
        EXPECT_EQ(kind_of(read_file(kFixtures + name)), ErrorKind::unsupported_feature) << name;
    }
    try {
        parse_stream(read_file(kFixtures + "/external_progressive.jpg"));
    } catch (const JpegError& e) {
        EXPECT_NE(std::string(e.what()).find("progressive"), std::string::npos);
    }
}

TEST(ParseStream, Truncation) {
    const auto bytes = write_stream(sample_contents());
    const std::size_t dqt = find_marker(bytes, marker::dqt);
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(dqt + 10));
    EXPECT_EQ(kind_of(cut), ErrorKind::truncated);
    const std::vector<std::uint8_t> no_eoi(bytes.begin(), bytes.end() - 2);
    EXPECT_EQ(kind_of(no_eoi), ErrorKind::truncated);
    const std::vector<std::uint8_t> soi_only{0xFF, 0xD8};
    EXPECT_EQ(kind_of(soi_only), ErrorKind::truncated);
}

TEST(ParseStream, MissingTables) {
    auto c = sample_contents();
    auto bytes = write_stream(c);
    // Redirect the scan to AC table 1, which is never defined.
    const std::size_t sos = find_marker(bytes, marker::sos);
    bytes[sos + 6] = 0x01;
    EXPECT_EQ(kind_of(bytes), ErrorKind::missing_table);

    bytes = write_stream(c);
    bytes[find_marker(bytes, marker::sof0) + 12] = 2;  // quant table id
    EXPECT_EQ(kind_of(bytes), ErrorKind::missing_table);
}

TEST(ParseStream, AcceptsMultiTableSegmentsAndFillBytes) {
    const auto c = sample_contents();
    const auto bytes = write_stream(c);
    const auto doc = parse_stream(bytes);
    // Merge both DHT segments into one and add fill bytes before SOS.
    std::vector<std::uint8_t> merged(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(find_marker(bytes, marker::dht)));
    std::vector<std::uint8_t> dht{0x00};
    dht.insert(dht.end(), c.dc_table.counts.begin(), c.dc_table.counts.end());
    dht.insert(dht.end(), c.dc_table.symbols.begin(), c.dc_table.symbols.end());
    dht.push_back(0x10);
    dht.insert(dht.end(), c.ac_table.counts.begin(), c.ac_table.counts.end());
    dht.insert(dht.end(), c.ac_table.symbols.begin(), c.ac_table.symbols.end());
    write_segment(merged, marker::dht, dht);
    merged.push_back(0xFF);
    merged.push_back(0xFF);
    merged.insert(merged.end(), bytes.begin() + static_cast<std::ptrdiff_t>(find_marker(bytes, marker::sos)), bytes.end());
    const auto again = parse_stream(merged);
    EXPECT_EQ(again.dc_table(), c.dc_table);
    EXPECT_EQ(again.ac_table(), c.ac_table);
    EXPECT_EQ(again.payload, c.payload);
}

TEST(ParseStream, FileOffsetsAccountForStuffing) {
    const auto c = sample_contents();
    const auto bytes = write_stream(c);
    const auto doc = parse_stream(bytes);
    for (std::size_t i = 0; i < doc.payload.size(); ++i) {
        EXPECT_EQ(bytes[doc.file_offset(i)], doc.payload[i]);
    }
}
