#pragma once

#include <cstdint>
#include <utility>

#include "crackweak/errors.hpp"
#include "crackweak/raster.hpp"

namespace crackweak {

/// Knobs of the low-quality annotation synthesis pipeline.
struct SynthesisConfig {
    int n_dil = 0;                 // dilations applied before deformation
    double recall_lo = 0.925;      // lower bound of the target coverage window
    double recall_hi = 0.975;      // upper bound of the target coverage window
    double sigma = 12.0;           // displacement field smoothness, pixels
    double affine_factor = 0.2;    // strength of the random affine perturbation
    int alpha_lo = 10;             // initial deformation magnitude search bounds
    int alpha_hi = 10000;
    std::uint64_t seed = 0;
    int max_trials = 64;           // deterministic failure instead of looping forever

    /// Throws ParameterError when any knob is out of range.
    void validate() const;
};

/// What the recall-window search did for one mask.
struct SynthesisRecord {
    double achieved_recall = 0.0;
    int alpha_used = 0;
    int trials = 0;
    std::pair<int, int> final_bounds{0, 0};  // (alpha_lo, alpha_hi) at termination
};

struct SynthesisResult {
    BinaryMask mask;
    SynthesisRecord record;
};

/// Raised when max_trials candidates all missed the recall window.
/// Carries the candidate whose recall came closest.
class SynthesisSearchError : public Error {
public:
    SynthesisSearchError(std::string message, BinaryMask best, SynthesisRecord record)
        : Error(std::move(message)), best_mask(std::move(best)), best_record(record) {}

    BinaryMask best_mask;
    SynthesisRecord best_record;
};

/// Morphological dilation with a 3x3 square structuring element (8-connected),
/// applied `times` times. times=0 returns the input unchanged.
BinaryMask dilate(const BinaryMask& mask, int times);

/// Random elastic warp of a mask:
///   1. two per-pixel uniform [-1,1] fields drawn from `seed`
///   2. each smoothed with a Gaussian of standard deviation `sigma`
///   3. scaled by `alpha` to form the displacement field
///   4. composed with a small random affine map (rotation within
///      +-affine_factor*15 degrees, isotropic scale within 1+-affine_factor*0.1,
///      translation within +-affine_factor*2% of the image diagonal)
///   5. nearest-neighbor lookup of source positions, borders replicated
/// Deterministic in (mask, alpha, sigma, affine_factor, seed).
BinaryMask elastic_transform(const BinaryMask& mask, double alpha, double sigma,
                             double affine_factor, std::uint64_t seed);

/// TP / (TP + FN) of candidate against the precise mask; 1.0 when the precise
/// mask has no true pixels.
double recall(const BinaryMask& candidate, const BinaryMask& precise);

/// Synthesizes a low-quality annotation: dilates n_dil times, then searches a
/// deformation magnitude alpha whose warp covers a fraction of the precise
/// crack pixels inside [recall_lo, recall_hi]. Each trial samples alpha
/// uniformly from the current integer bounds and narrows them: overshooting
/// the window raises the lower bound to that alpha, undershooting lowers the
/// upper bound. Collapsed bounds are reset to the configured range. Trial
/// randomness is derived from (seed, trial index).
/// Throws InputError when `precise` is empty and SynthesisSearchError when
/// max_trials is exhausted.
SynthesisResult synthesize(const BinaryMask& precise, const SynthesisConfig& config);

}  // namespace crackweak
