#include "crackweak/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "crackweak/errors.hpp"

namespace crackweak {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw FileMissingError("cannot open " + path.string());
    }
    return f;
}

// Decoded PNG normalized to gray8, gray16 or rgb8.
struct DecodedPng {
    int width = 0;
    int height = 0;
    int bit_depth = 0;   // 8 or 16
    int channels = 0;    // 1 or 3
    std::vector<std::uint8_t> bytes;  // row-major, 16-bit samples big-endian
};

DecodedPng decode_png(const std::filesystem::path& path, bool reduce_16_to_8) {
    FilePtr file = open_file(path, "rb");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FileFormatError(path.string() + " is not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("png_create_info_struct failed");
    }

    DecodedPng out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FileFormatError("failed to decode " + path.string());
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if ((color_type & PNG_COLOR_MASK_ALPHA) || png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_strip_alpha(png);
    }
    if (depth == 16 && reduce_16_to_8) png_set_strip_16(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    out.channels = png_get_channels(png, info);

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    out.bytes.resize(row_bytes * static_cast<std::size_t>(out.height));
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) {
        rows[y] = out.bytes.data() + row_bytes * static_cast<std::size_t>(y);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void write_png(const std::filesystem::path& path, int width, int height, int bit_depth,
               int color_type, const std::vector<std::uint8_t>& bytes) {
    if (!path.parent_path().empty()) {
        std::filesystem::create_directories(path.parent_path());
    }
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) throw FileMissingError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png_create_info_struct failed");
    }
    std::vector<png_const_bytep> rows(height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("failed to encode " + path.string());
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    for (int y = 0; y < height; ++y) {
        rows[y] = bytes.data() + row_bytes * static_cast<std::size_t>(y);
    }
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

std::pair<int, int> read_png_dims(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");

    unsigned char header[8 + 4 + 4 + 13];  // signature + IHDR length/type + IHDR payload
    if (std::fread(header, 1, sizeof(header), file.get()) != sizeof(header) ||
        png_sig_cmp(header, 0, 8) != 0 || std::memcmp(header + 12, "IHDR", 4) != 0) {
        throw FileFormatError(path.string() + " is not a PNG file");
    }
    const auto be32 = [&](int off) {
        return (static_cast<int>(header[off]) << 24) | (static_cast<int>(header[off + 1]) << 16) |
               (static_cast<int>(header[off + 2]) << 8) | static_cast<int>(header[off + 3]);
    };
    return {be32(16), be32(20)};
}

GrayImage read_gray_png(const std::filesystem::path& path) {
    DecodedPng d = decode_png(path, /*reduce_16_to_8=*/true);
    if (d.channels != 1) {
        throw FileFormatError(path.string() + " is not grayscale");
    }
    return GrayImage(d.width, d.height, std::move(d.bytes));
}

RgbImage read_rgb_png(const std::filesystem::path& path) {
    DecodedPng d = decode_png(path, /*reduce_16_to_8=*/true);
    if (d.channels != 3) {
        throw FileFormatError(path.string() + " is not RGB");
    }
    return RgbImage(d.width, d.height, std::move(d.bytes));
}

GrayImage read_image_as_gray(const std::filesystem::path& path, const GrayWeights& weights) {
    DecodedPng d = decode_png(path, /*reduce_16_to_8=*/true);
    if (d.channels == 1) {
        return GrayImage(d.width, d.height, std::move(d.bytes));
    }
    if (d.channels == 3) {
        return to_gray(RgbImage(d.width, d.height, std::move(d.bytes)), weights);
    }
    throw FileFormatError(path.string() + " has unsupported channel count");
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    GrayImage gray = read_image_as_gray(path);
    std::vector<std::uint8_t> bits(gray.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = gray.pixels()[i] >= 128 ? 1 : 0;
    }
    return BinaryMask(gray.width(), gray.height(), std::move(bits));
}

ProbMap read_prob_png(const std::filesystem::path& path) {
    DecodedPng d = decode_png(path, /*reduce_16_to_8=*/false);
    if (d.channels != 1) {
        throw FileFormatError(path.string() + " is not a grayscale probability map");
    }
    const std::size_t n = static_cast<std::size_t>(d.width) * d.height;
    std::vector<float> probs(n);
    if (d.bit_depth == 8) {
        for (std::size_t i = 0; i < n; ++i) {
            probs[i] = static_cast<float>(d.bytes[i]) / 255.0f;
        }
    } else if (d.bit_depth == 16) {
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = (static_cast<unsigned>(d.bytes[2 * i]) << 8) | d.bytes[2 * i + 1];
            probs[i] = static_cast<float>(v) / 65535.0f;
        }
    } else {
        throw FileFormatError(path.string() + " has unsupported bit depth");
    }
    return ProbMap(d.width, d.height, std::move(probs));
}

void write_gray_png(const std::filesystem::path& path, const GrayImage& image) {
    write_png(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_GRAY, image.pixels());
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
    write_png(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, image.pixels());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(mask.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = mask.pixels()[i] ? 255 : 0;
    }
    write_png(path, mask.width(), mask.height(), 8, PNG_COLOR_TYPE_GRAY, bytes);
}

ProbMap quantize16(const ProbMap& map) {
    std::vector<float> out(map.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(std::lround(map.pixels()[i] * 65535.0)) / 65535.0f;
    }
    return ProbMap(map.width(), map.height(), std::move(out));
}

void write_prob_png(const std::filesystem::path& path, const ProbMap& map) {
    std::vector<std::uint8_t> bytes(map.size() * 2);
    for (std::size_t i = 0; i < map.size(); ++i) {
        const auto v = static_cast<unsigned>(std::lround(map.pixels()[i] * 65535.0));
        bytes[2 * i] = static_cast<std::uint8_t>(v >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(v & 0xFF);
    }
    write_png(path, map.width(), map.height(), 16, PNG_COLOR_TYPE_GRAY, bytes);
}

}  // namespace crackweak
