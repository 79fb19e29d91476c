#pragma once

#include <filesystem>

#include "crackweak/raster.hpp"

namespace crackweak {

/// Parameters of the built-in classical detector.
struct BaselineParams {
    double background_sigma = 20.0;  // blur radius estimating the local background
    double contrast_scale = 60.0;    // brightness deficit mapped to probability 1
};

enum class MacroKind {
    external_map,        // probability maps produced elsewhere, loaded from files
    classical_baseline,  // built-in darker-than-surroundings detector
};

/// Where Macro Branch probability maps come from. Any crack detector can fill
/// this role; external model outputs are the first-class path.
struct MacroSource {
    MacroKind kind = MacroKind::classical_baseline;
    BaselineParams params;
    std::filesystem::path external_dir;  // map directory when kind == external_map
};

/// Loads an 8- or 16-bit grayscale PNG as probabilities (divided by the
/// bit-depth maximum) and checks it against the expected dimensions.
/// Missing file, wrong color type and dimension mismatch raise distinct
/// errors (FileMissingError, FileFormatError, StructuralError).
ProbMap load_prob_map(const std::filesystem::path& path, int expected_width,
                      int expected_height);

/// Black-top-hat style score: background = gaussian_blur(image,
/// background_sigma); p = clamp((background - v) / contrast_scale, 0, 1).
/// Scores pixels darker than their surroundings, independent of global
/// brightness shifts.
ProbMap classical_baseline(const GrayImage& image, const BaselineParams& params);

}  // namespace crackweak
