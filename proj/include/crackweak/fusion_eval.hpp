#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crackweak/raster.hpp"

namespace crackweak {

/// Exact pixel-wise counts and rates for one image. No pixel tolerance:
/// a prediction one pixel off the annotation is a miss plus a false alarm.
struct ImageScore {
    std::string image_id;
    double precision = 0.0;
    double recall = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
};

struct SweepPoint {
    double threshold = 0.0;
    double macro_f1 = 0.0;
};

/// Full threshold sweep curve plus the argmax point.
struct SweepResult {
    std::vector<SweepPoint> curve;
    std::size_t best_index = 0;

    const SweepPoint& best() const { return curve[best_index]; }
};

struct EvalReport {
    std::vector<ImageScore> scores;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    double threshold = 0.5;
    std::optional<SweepResult> sweep;
};

/// Per-class brightness distributions over 256 bins, plus the overlap
/// coefficient of the two normalized histograms. Overlap near 0 means
/// darkness alone separates crack from background; near 1 means it cannot.
struct BrightnessHistogram {
    std::array<std::uint64_t, 256> crack_bins{};
    std::array<std::uint64_t, 256> noncrack_bins{};
    double overlap = 0.0;
};

/// Pointwise product of the two branch outputs. The darkness branch can only
/// suppress detections, never add them: fuse(a,b) <= min(a,b) pixelwise.
ProbMap fuse(const ProbMap& macro_map, const ProbMap& micro_map);

/// Exact pixel-wise precision/recall. Degenerate cases: an empty prediction
/// has precision 1.0 against an empty annotation and 0.0 otherwise; an empty
/// annotation always yields recall 1.0.
ImageScore score_image(const BinaryMask& pred, const BinaryMask& gt);

/// Harmonic mean of the per-image-averaged precision and recall. Weighs every
/// image equally, unlike the pooled variant. 0 when both averages are 0.
double macro_f1(const std::vector<ImageScore>& scores);

/// F1 from tp/fp/fn pooled across images: 2tp / (2tp + fp + fn). Weighs
/// images with thicker cracks more. 1.0 when all counts are zero.
double micro_f1(const std::vector<ImageScore>& scores);

/// Thresholds every map at each grid value and evaluates macro F1. Returns
/// the whole curve, including grid points where F1 is 0.
SweepResult sweep_threshold(const std::vector<ProbMap>& probs,
                            const std::vector<BinaryMask>& gts,
                            const std::vector<double>& grid);

/// Bins pixel brightness by annotation class over aligned image/mask pairs.
BrightnessHistogram brightness_histograms(const std::vector<GrayImage>& images,
                                          const std::vector<BinaryMask>& gts);

}  // namespace crackweak
