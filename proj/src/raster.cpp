#include "crackweak/raster.hpp"

#include <cmath>
#include <string>

#include "crackweak/errors.hpp"

namespace crackweak {

namespace {

void check_dims(int width, int height, std::size_t pixel_count, std::size_t channels) {
    if (width <= 0 || height <= 0) {
        throw StructuralError("raster dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    if (pixel_count != expected) {
        throw StructuralError("pixel buffer length " + std::to_string(pixel_count) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

}  // namespace

GrayImage::GrayImage(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0), 0) {
    check_dims(width, height, pixels_.size(), 1);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height, pixels_.size(), 1);
}

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0), 0) {
    check_dims(width, height, pixels_.size(), 1);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height, pixels_.size(), 1);
    for (auto& p : pixels_) p = p ? 1 : 0;  // normalize so equality is bitwise
}

std::uint64_t BinaryMask::count_true() const {
    std::uint64_t n = 0;
    for (std::uint8_t p : pixels_) n += p;
    return n;
}

ProbMap::ProbMap(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0), 0.0f) {
    check_dims(width, height, pixels_.size(), 1);
}

ProbMap::ProbMap(int width, int height, std::vector<float> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height, pixels_.size(), 1);
    for (float p : pixels_) {
        if (!(p >= 0.0f && p <= 1.0f)) {
            throw InputError("probability value " + std::to_string(p) + " outside [0,1]");
        }
    }
}

RgbImage::RgbImage(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0) * 3, 0) {
    check_dims(width, height, pixels_.size(), 3);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), pixels_(std::move(interleaved)) {
    check_dims(width, height, pixels_.size(), 3);
}

RgbImage RgbImage::from_planes(const GrayImage& r, const GrayImage& g, const GrayImage& b) {
    if (r.width() != g.width() || r.height() != g.height() ||
        r.width() != b.width() || r.height() != b.height()) {
        throw StructuralError("channel planes disagree on dimensions");
    }
    std::vector<std::uint8_t> inter(r.size() * 3);
    for (std::size_t i = 0; i < r.size(); ++i) {
        inter[3 * i] = r.pixels()[i];
        inter[3 * i + 1] = g.pixels()[i];
        inter[3 * i + 2] = b.pixels()[i];
    }
    return RgbImage(r.width(), r.height(), std::move(inter));
}

GrayImage to_gray(const RgbImage& rgb, const GrayWeights& weights) {
    if (weights.r < 0.0 || weights.g < 0.0 || weights.b < 0.0) {
        throw ParameterError("gray weights must be non-negative");
    }
    const double sum = weights.r + weights.g + weights.b;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ParameterError("gray weights must sum to 1, got " + std::to_string(sum));
    }
    std::vector<std::uint8_t> out(rgb.pixels().size() / 3);
    const auto& px = rgb.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = weights.r * px[3 * i] + weights.g * px[3 * i + 1] +
                         weights.b * px[3 * i + 2];
        const long rounded = std::lround(v);
        out[i] = static_cast<std::uint8_t>(rounded < 0 ? 0 : (rounded > 255 ? 255 : rounded));
    }
    return GrayImage(rgb.width(), rgb.height(), std::move(out));
}

BinaryMask threshold(const ProbMap& prob, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ParameterError("threshold " + std::to_string(t) + " outside [0,1]");
    }
    std::vector<std::uint8_t> out(prob.size());
    const auto& px = prob.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        out[i] = static_cast<double>(px[i]) >= t ? 1 : 0;
    }
    return BinaryMask(prob.width(), prob.height(), std::move(out));
}

}  // namespace crackweak
