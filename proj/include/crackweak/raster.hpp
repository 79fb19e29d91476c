#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace crackweak {

/// Single-channel brightness raster, values 0-255, row-major.
class GrayImage {
public:
    GrayImage(int width, int height);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel crack/non-crack annotation or thresholded prediction.
/// Stored as 0/1 bytes, row-major.
class BinaryMask {
public:
    BinaryMask(int width, int height);
    BinaryMask(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool at(int x, int y) const { return pixels_[index(x, y)] != 0; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    /// Number of true (crack) pixels.
    std::uint64_t count_true() const;

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel crack probability in [0,1], row-major.
class ProbMap {
public:
    ProbMap(int width, int height);
    ProbMap(int width, int height, std::vector<float> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    float at(int x, int y) const { return pixels_[index(x, y)]; }
    const std::vector<float>& pixels() const { return pixels_; }

    bool operator==(const ProbMap&) const = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_;
    int height_;
    std::vector<float> pixels_;
};

/// 3-channel raster, interleaved RGB bytes, row-major.
class RgbImage {
public:
    RgbImage(int width, int height);
    RgbImage(int width, int height, std::vector<std::uint8_t> interleaved);

    /// Builds an RGB image from three equally sized channel planes.
    /// Throws StructuralError when the planes disagree on dimensions.
    static RgbImage from_planes(const GrayImage& r, const GrayImage& g, const GrayImage& b);

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t red(int x, int y) const { return pixels_[3 * index(x, y)]; }
    std::uint8_t green(int x, int y) const { return pixels_[3 * index(x, y) + 1]; }
    std::uint8_t blue(int x, int y) const { return pixels_[3 * index(x, y) + 2]; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Channel weights for luma conversion. Must be non-negative and sum to 1
/// within 1e-9.
struct GrayWeights {
    double r = 0.299;
    double g = 0.587;
    double b = 0.114;
};

/// BT.601 luma triple, the default conversion.
inline constexpr GrayWeights kBt601{0.299, 0.587, 0.114};

/// Weighted luma conversion: out = round(w.r*R + w.g*G + w.b*B), clamped to [0,255].
GrayImage to_gray(const RgbImage& rgb, const GrayWeights& weights = kBt601);

/// Pixel is crack iff probability >= t. Inclusive, so t=0 selects everything.
/// Throws ParameterError when t is outside [0,1].
BinaryMask threshold(const ProbMap& prob, double t);

}  // namespace crackweak
