#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "grayjpeg/codec.hpp"
#include "grayjpeg/pgm.hpp"
#include "oracles.hpp"

using namespace grayjpeg;

namespace {

const std::string kFixtures = GRAYJPEG_FIXTURE_DIR;

ImageBuffer random_image(std::mt19937& rng, std::size_t w, std::size_t h) {
    std::uniform_int_distribution<int> dist(0, 255);
    ImageBuffer img(w, h);
    for (auto& s : img.samples()) {
        s = static_cast<std::uint8_t>(dist(rng));
    }
    return img;
}

ImageBuffer smooth_image(std::size_t w, std::size_t h, double phase) {
    ImageBuffer img(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = 128 + 60 * std::sin(0.15 * x + phase) + 50 * std::cos(0.11 * y - phase);
            img(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

int max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
    int worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(int{a.samples()[i]} - int{b.samples()[i]}));
    }
    return worst;
}

}  // namespace

TEST(ImageBuffer, DimensionLimits) {
    EXPECT_THROW(ImageBuffer(0, 5), std::invalid_argument);
    EXPECT_THROW(ImageBuffer(5, 65536), std::invalid_argument);
    EXPECT_THROW(ImageBuffer(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
    EXPECT_THROW(encode_image(ImageBuffer{}, {}), std::invalid_argument);
    EXPECT_NO_THROW(ImageBuffer(65535, 1));
}

TEST(EncodeImage, FlatMidGrayQuantizesToZero) {
    const ImageBuffer img(8, 8, 128);
    const auto blocks = quantize_image(img, scale_table(default_luminance_table(), 50));
    ASSERT_EQ(blocks.size(), 1u);
    for (int level : blocks[0].levels) {
        EXPECT_EQ(level, 0);
    }
    EXPECT_EQ(decode_image(encode_image(img, {50, false})), img);
}

TEST(EncodeImage, TilesLeftToRight) {
    ImageBuffer img(16, 8, 0);
    for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 8; x < 16; ++x) {
            img(x, y) = 255;
        }
    }
    const auto blocks = quantize_image(img, QuantizationTable::uniform(1));
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks[0][0], -1024);  // 8 * (0 - 128)
    EXPECT_EQ(blocks[1][0], 1016);   // 8 * (255 - 128)
    const auto doc = parse_stream(encode_image(img, {90, false}));
    EXPECT_EQ(decode_levels(doc).size(), 2u);
}

TEST(EncodeImage, PadsAndCrops) {
    std::mt19937 rng(40);
    const auto img = random_image(rng, 12, 10);
    const auto stream = encode_image(img, {75, false});
    const auto doc = parse_stream(stream);
    EXPECT_EQ(decode_levels(doc).size(), 4u);
    const auto back = decode_image(stream);
    EXPECT_EQ(back.width(), 12u);
    EXPECT_EQ(back.height(), 10u);
}

TEST(EncodeImage, EdgeReplication) {
    ImageBuffer img(3, 2, 0);
    img(2, 0) = 200;
    img(1, 1) = 50;
    const SampleBlock b = extract_block(img, 0, 0);
    EXPECT_EQ(b(0, 7), 200 - 128);
    EXPECT_EQ(b(7, 1), 50 - 128);
    EXPECT_EQ(b(7, 7), int{img(2, 1)} - 128);
}

TEST(EncodeImage, Deterministic) {
    std::mt19937 rng(41);
    const auto img = random_image(rng, 29, 17);
    EXPECT_EQ(encode_image(img, {65, true}), encode_image(img, {65, true}));
    EXPECT_EQ(encode_image(img, {65, false}), encode_image(img, {65, false}));
}

TEST(DecodeImage, QualityHundredErrorAtMostTwo) {
    std::mt19937 rng(42);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<int> dim(1, 40);
        const auto img = random_image(rng, static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)));
        const auto back = decode_image(encode_image(img, {100, t % 2 == 1}));
        ASSERT_LE(max_abs_diff(img, back), 2);
    }
}

TEST(DecodeImage, ExternalFixtureMatchesIndependentDecoder) {
    const auto decoded = decode_image(read_file(kFixtures + "/external_baseline.jpg"));
    const auto reference = read_pgm(kFixtures + "/external_baseline_reference.pgm");
    ASSERT_EQ(decoded.width(), reference.width());
    ASSERT_EQ(decoded.height(), reference.height());
    EXPECT_LE(max_abs_diff(decoded, reference), 1);
    const auto source = read_pgm(kFixtures + "/external_baseline_source.pgm");
    EXPECT_GT(psnr(source, decoded), 30.0);
}

TEST(DecodeImage, TruncatedStreamThrows) {
    const auto stream = encode_image(smooth_image(40, 40, 0.3), {80, false});
    for (std::size_t keep : {stream.size() - 2, stream.size() / 2, std::size_t{300}, std::size_t{3}}) {
        const std::vector<std::uint8_t> cut(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(keep));
        try {
            decode_image(cut);
            FAIL() << "decoded a stream cut to " << keep << " bytes";
        } catch (const JpegError& e) {
            EXPECT_EQ(e.kind(), ErrorKind::truncated) << e.what();
        }
    }
}

TEST(DecodeImage, CorruptEntropyDataReportsFileOffset) {
    auto stream = encode_image(smooth_image(32, 32, 1.0), {80, false});
    const auto doc = parse_stream(stream);
    // Trailing garbage inside the scan: decoder must reject it with an offset inside the file.
    stream.insert(stream.end() - 2, {0x12, 0x34, 0x56});
    try {
        decode_image(stream);
        FAIL();
    } catch (const JpegError& e) {
        ASSERT_TRUE(e.offset().has_value());
        EXPECT_GE(*e.offset(), doc.payload_offset);
        EXPECT_LT(*e.offset(), stream.size());
    }
}

TEST(DecodeImage, DimensionPreservation) {
    std::mt19937 rng(43);
    for (std::size_t w = 1; w <= 33; w += 4) {
        for (std::size_t h = 1; h <= 33; ++h) {
            const auto img = random_image(rng, w, h);
            const auto back = decode_image(encode_image(img, {50, false}));
            ASSERT_EQ(back.width(), w);
            ASSERT_EQ(back.height(), h);
        }
    }
}

TEST(DecodeImage, PaddingNeutrality) {
    // A 13x11 image padded by the encoder must code exactly like a 16x16
    // image whose margin already holds the replicated edge.
    std::mt19937 rng(44);
    const auto small = random_image(rng, 13, 11);
    ImageBuffer replicated(16, 16);
    ImageBuffer other_margin(16, 16);
    std::uniform_int_distribution<int> dist(0, 255);
    for (std::size_t y = 0; y < 16; ++y) {
        for (std::size_t x = 0; x < 16; ++x) {
            replicated(x, y) = small(std::min<std::size_t>(x, 12), std::min<std::size_t>(y, 10));
            other_margin(x, y) = (x < 13 && y < 11) ? small(x, y) : static_cast<std::uint8_t>(dist(rng));
        }
    }
    const QuantizationTable table = scale_table(default_luminance_table(), 100);
    EXPECT_EQ(quantize_image(small, table), quantize_image(replicated, table));

    const auto a = decode_image(encode_image(small, {100, false}));
    const auto b = decode_image(encode_image(replicated, {100, false}));
    const auto c = decode_image(encode_image(other_margin, {100, false}));
    for (std::size_t y = 0; y < 11; ++y) {
        for (std::size_t x = 0; x < 13; ++x) {
            ASSERT_EQ(a(x, y), b(x, y));
            ASSERT_LE(std::abs(int{a(x, y)} - int{c(x, y)}), 2);
        }
    }
}

TEST(DecodeImage, OptimizedTablesShrinkOutput) {
    const auto img = read_pgm(kFixtures + "/camera.pgm");
    const auto standard = encode_image(img, {75, false});
    const auto optimized = encode_image(img, {75, true});
    EXPECT_LT(optimized.size(), standard.size());
    EXPECT_EQ(decode_image(standard), decode_image(optimized));

    const auto doc = parse_stream(optimized);
    for (const HuffmanTable& table : {doc.dc_table(), doc.ac_table()}) {
        const auto lengths = table.lengths();
        const auto codes = table.codes();
        for (std::size_t i = 0; i < codes.size(); ++i) {
            EXPECT_NE(codes[i], (1u << lengths[i]) - 1) << "all-ones code of length " << lengths[i];
        }
    }
}

TEST(Metrics, Psnr) {
    const ImageBuffer a(8, 8, 100);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    const ImageBuffer b(8, 8, 101);
    EXPECT_NEAR(psnr(a, b), 48.13, 0.01);
    ImageBuffer c = a;
    for (std::size_t i = 0; i < c.size(); i += 2) {
        c.samples()[i] = 102;
    }
    EXPECT_NEAR(mean_squared_error(a, c), 2.0, 1e-12);
    EXPECT_NEAR(psnr(a, c), 45.12, 0.01);
    EXPECT_THROW(psnr(a, ImageBuffer(8, 9)), std::invalid_argument);
}

TEST(Metrics, CompressionRatio) {
    const ImageBuffer img(8, 8);
    EXPECT_DOUBLE_EQ(compression_ratio(img, std::vector<std::uint8_t>(32)), 2.0);
    EXPECT_THROW(compression_ratio(img, std::vector<std::uint8_t>{}), std::invalid_argument);
    const ImageBuffer flat(64, 64, 77);
    EXPECT_GT(compression_ratio(flat, encode_image(flat, {50, false})), 10.0);
}

TEST(Metrics, RatioRisesAsQualityFalls) {
    const auto img = read_pgm(kFixtures + "/camera.pgm");
    double previous = 0.0;
    for (int q = 95; q >= 10; q -= 5) {
        const double ratio = compression_ratio(img, encode_image(img, {q, false}));
        EXPECT_GT(ratio, previous) << "quality " << q;
        previous = ratio;
    }
}
