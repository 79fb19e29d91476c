#pragma once

#include "crackweak/raster.hpp"

namespace crackweak {

struct MicroConfig {
    double smoothing_sigma = 0.0;     // 0 = no smoothing
    bool normalize_per_image = false;
};

/// Separable Gaussian convolution, kernel radius ceil(3*sigma), kernel
/// normalized to sum 1, borders replicated, rounded back to [0,255].
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// Per-pixel darkness as crack probability: (255 - v) / 255 after optional
/// smoothing. With normalize_per_image the result is rescaled so min -> 0 and
/// max -> 1; constant images map to all-0.5.
ProbMap micro_prob(const GrayImage& image, const MicroConfig& config = {});

}  // namespace crackweak
