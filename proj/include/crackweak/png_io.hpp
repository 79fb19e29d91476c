#pragma once

#include <filesystem>
#include <utility>

#include "crackweak/raster.hpp"

namespace crackweak {

/// (width, height) from the PNG header without decoding the pixel data.
std::pair<int, int> read_png_dims(const std::filesystem::path& path);

/// Reads an 8-bit grayscale PNG. 16-bit gray input is reduced to 8 bits;
/// palette images are expanded; RGB input is a FileFormatError.
GrayImage read_gray_png(const std::filesystem::path& path);

/// Reads an 8-bit RGB PNG (alpha stripped, palette expanded). Grayscale
/// input is a FileFormatError.
RgbImage read_rgb_png(const std::filesystem::path& path);

/// Reads any supported PNG as brightness: grayscale directly, RGB through
/// the given luma weights.
GrayImage read_image_as_gray(const std::filesystem::path& path,
                             const GrayWeights& weights = kBt601);

/// Reads an annotation PNG and binarizes at brightness >= 128
/// (white = crack). Anti-aliased mask edges land on the nearer side.
BinaryMask read_mask_png(const std::filesystem::path& path);

/// Reads an 8- or 16-bit grayscale PNG as probabilities, dividing by the
/// bit-depth maximum. Other color types are a FileFormatError.
ProbMap read_prob_png(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG.
void write_gray_png(const std::filesystem::path& path, const GrayImage& image);

/// Writes an 8-bit RGB PNG.
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

/// Writes a mask as an 8-bit grayscale PNG, true -> 255, false -> 0.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Writes a probability map as a 16-bit grayscale PNG, v = round(p * 65535),
/// so the round trip is exact to better than 1e-4.
void write_prob_png(const std::filesystem::path& path, const ProbMap& map);

/// Snaps probabilities to the persisted 16-bit grid: round(p*65535)/65535.
/// quantize16(m) equals reading back write_prob_png(m) exactly.
ProbMap quantize16(const ProbMap& map);

}  // namespace crackweak
