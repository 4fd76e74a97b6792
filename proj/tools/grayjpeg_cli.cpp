#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grayjpeg/grayjpeg.hpp"

namespace {

using namespace grayjpeg;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string format_psnr(double db) {
    if (std::isinf(db)) {
        return "inf";
    }
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << db;
    return os.str();
}

void report(const JpegError& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.detail();
    if (e.offset()) {
        std::cerr << " (at byte offset " << *e.offset() << ")";
    }
    std::cerr << "\n";
}

int run_encode(const std::string& in, const std::string& out, int quality, bool optimize) {
    const ImageBuffer image = read_pgm(in);
    const auto start = std::chrono::steady_clock::now();
    const auto stream = encode_image(image, {quality, optimize});
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    write_file(out, stream);
    std::cout << "encoded_bytes: " << stream.size() << "\n"
              << "compression_ratio: " << std::fixed << std::setprecision(4) << compression_ratio(image, stream) << "\n"
              << "elapsed_ms: " << std::setprecision(3) << elapsed.count() << "\n";
    return 0;
}

int run_decode(const std::string& in, const std::string& out) {
    const ImageBuffer image = decode_image(read_file(in));
    write_pgm(out, image);
    std::cout << "decoded: " << image.width() << "x" << image.height() << "\n";
    return 0;
}

void print_table(const char* label, const std::vector<int>& values) {
    std::cout << "  " << label << ":\n";
    for (std::size_t row = 0; row < kBlockSide; ++row) {
        std::cout << "   ";
        for (std::size_t col = 0; col < kBlockSide; ++col) {
            std::cout << ' ' << std::setw(3) << values[row * kBlockSide + col];
        }
        std::cout << "\n";
    }
}

int run_inspect(const std::string& in) {
    const auto bytes = read_file(in);
    const JpegDocument doc = parse_stream(bytes);

    std::cout << "markers:\n";
    for (const auto& seg : doc.segments) {
        std::cout << "  " << std::left << std::setw(6) << marker_name(seg.marker) << std::right
                  << " offset=" << seg.offset << " length=" << seg.length << "\n";
    }
    std::cout << "dimensions: " << doc.frame.width << "x" << doc.frame.height << "\n"
              << "precision: " << int{doc.frame.precision} << "\n"
              << "entropy_bytes: " << doc.payload.size() << "\n";

    for (std::size_t id = 0; id < doc.quant_tables.size(); ++id) {
        if (!doc.quant_tables[id]) {
            continue;
        }
        const auto& table = *doc.quant_tables[id];
        std::vector<int> zz(kBlockSize);
        std::vector<int> natural(kBlockSize);
        for (std::size_t i = 0; i < kBlockSize; ++i) {
            zz[i] = table.zigzag(i);
            natural[i] = table.natural(i);
        }
        std::cout << "quantization_table " << id << ":\n";
        print_table("zigzag", zz);
        print_table("natural", natural);
    }

    auto summarize = [](const char* kind, std::size_t id, const HuffmanTable& table) {
        const auto lengths = table.lengths();
        std::cout << "huffman_table " << kind << " " << id << ": symbols=" << table.symbols.size()
                  << " max_length=" << (lengths.empty() ? 0 : lengths.back()) << " counts=";
        for (std::size_t i = 0; i < table.counts.size(); ++i) {
            std::cout << (i ? "," : "") << int{table.counts[i]};
        }
        std::cout << "\n";
    };
    for (std::size_t id = 0; id < 4; ++id) {
        if (doc.dc_tables[id]) {
            summarize("DC", id, *doc.dc_tables[id]);
        }
    }
    for (std::size_t id = 0; id < 4; ++id) {
        if (doc.ac_tables[id]) {
            summarize("AC", id, *doc.ac_tables[id]);
        }
    }
    return 0;
}

int run_sweep(const std::string& in, const std::vector<int>& qualities, bool optimize) {
    const ImageBuffer image = read_pgm(in);
    std::cout << "quality,bytes,compression_ratio,psnr_db\n";
    for (int q : qualities) {
        const auto stream = encode_image(image, {q, optimize});
        const ImageBuffer decoded = decode_image(stream);
        std::cout << q << "," << stream.size() << "," << std::fixed << std::setprecision(4)
                  << compression_ratio(image, stream) << "," << format_psnr(psnr(image, decoded)) << "\n";
        std::cout.unsetf(std::ios::fixed);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Baseline grayscale JPEG encoder, decoder and inspector"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    int quality = 75;
    bool optimize = false;
    std::vector<int> qualities;

    auto* encode = app.add_subcommand("encode", "Encode a P5 PGM into a baseline JPEG");
    encode->add_option("input", input, "Input PGM")->required();
    encode->add_option("output", output, "Output JPEG")->required();
    encode->add_option("-q,--quality", quality, "Quality 1..100")->check(CLI::Range(1, 100));
    encode->add_flag("--optimize-huffman", optimize, "Build Huffman tables from image statistics");

    auto* decode = app.add_subcommand("decode", "Decode a baseline grayscale JPEG into a P5 PGM");
    decode->add_option("input", input, "Input JPEG")->required();
    decode->add_option("output", output, "Output PGM")->required();

    auto* inspect = app.add_subcommand("inspect", "List the marker segments and tables of a JPEG");
    inspect->add_option("input", input, "Input JPEG")->required();

    auto* sweep = app.add_subcommand("sweep", "Print a rate-distortion table over several qualities");
    sweep->add_option("input", input, "Input PGM")->required();
    sweep->add_option("--qualities", qualities, "Comma-separated qualities")
        ->required()
        ->delimiter(',')
        ->check(CLI::Range(1, 100));
    sweep->add_flag("--optimize-huffman", optimize, "Build Huffman tables from image statistics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*encode) {
            return run_encode(input, output, quality, optimize);
        }
        if (*decode) {
            return run_decode(input, output);
        }
        if (*inspect) {
            return run_inspect(input);
        }
        if (*sweep) {
            return run_sweep(input, qualities, optimize);
        }
    } catch (const JpegError& e) {
        report(e);
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
