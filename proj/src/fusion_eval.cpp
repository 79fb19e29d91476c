#include "crackweak/fusion_eval.hpp"

#include <algorithm>
#include <string>

#include "crackweak/errors.hpp"

namespace crackweak {

ProbMap fuse(const ProbMap& macro_map, const ProbMap& micro_map) {
    if (macro_map.width() != micro_map.width() || macro_map.height() != micro_map.height()) {
        throw StructuralError("fuse: map dimensions differ");
    }
    std::vector<float> out(macro_map.size());
    const auto& a = macro_map.pixels();
    const auto& b = micro_map.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return ProbMap(macro_map.width(), macro_map.height(), std::move(out));
}

ImageScore score_image(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width() != gt.width() || pred.height() != gt.height()) {
        throw StructuralError("score_image: mask dimensions differ");
    }
    ImageScore s;
    const auto& p = pred.pixels();
    const auto& g = gt.pixels();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && g[i]) {
            ++s.tp;
        } else if (p[i]) {
            ++s.fp;
        } else if (g[i]) {
            ++s.fn;
        }
    }
    if (s.tp + s.fp == 0) {
        s.precision = (s.tp + s.fn == 0) ? 1.0 : 0.0;  // vacuous when gt is empty too
    } else {
        s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    }
    if (s.tp + s.fn == 0) {
        s.recall = 1.0;  // empty annotation: nothing to miss
    } else {
        s.recall = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
    }
    return s;
}

double macro_f1(const std::vector<ImageScore>& scores) {
    if (scores.empty()) throw InputError("macro_f1: empty score list");
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    for (const auto& s : scores) {
        precision_sum += s.precision;
        recall_sum += s.recall;
    }
    const double p = precision_sum / static_cast<double>(scores.size());
    const double r = recall_sum / static_cast<double>(scores.size());
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double micro_f1(const std::vector<ImageScore>& scores) {
    if (scores.empty()) throw InputError("micro_f1: empty score list");
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    for (const auto& s : scores) {
        tp += s.tp;
        fp += s.fp;
        fn += s.fn;
    }
    if (2 * tp + fp + fn == 0) return 1.0;  // no positives anywhere, vacuously perfect
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

SweepResult sweep_threshold(const std::vector<ProbMap>& probs,
                            const std::vector<BinaryMask>& gts,
                            const std::vector<double>& grid) {
    if (probs.size() != gts.size()) {
        throw StructuralError("sweep_threshold: probability and annotation lists differ in length");
    }
    if (probs.empty()) throw InputError("sweep_threshold: empty input lists");
    if (grid.empty()) throw InputError("sweep_threshold: empty threshold grid");
    for (double t : grid) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ParameterError("sweep grid value " + std::to_string(t) + " outside [0,1]");
        }
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i].width() != gts[i].width() || probs[i].height() != gts[i].height()) {
            throw StructuralError("sweep_threshold: dimensions differ at entry " +
                                  std::to_string(i));
        }
    }

    SweepResult result;
    result.curve.reserve(grid.size());
    for (double t : grid) {
        std::vector<ImageScore> scores;
        scores.reserve(probs.size());
        for (std::size_t i = 0; i < probs.size(); ++i) {
            scores.push_back(score_image(threshold(probs[i], t), gts[i]));
        }
        result.curve.push_back({t, macro_f1(scores)});
    }
    for (std::size_t i = 1; i < result.curve.size(); ++i) {
        if (result.curve[i].macro_f1 > result.curve[result.best_index].macro_f1) {
            result.best_index = i;
        }
    }
    return result;
}

BrightnessHistogram brightness_histograms(const std::vector<GrayImage>& images,
                                          const std::vector<BinaryMask>& gts) {
    if (images.size() != gts.size()) {
        throw StructuralError("brightness_histograms: image and annotation lists differ in length");
    }
    if (images.empty()) throw InputError("brightness_histograms: empty input lists");

    BrightnessHistogram hist;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& img = images[i];
        const auto& gt = gts[i];
        if (img.width() != gt.width() || img.height() != gt.height()) {
            throw StructuralError("brightness_histograms: dimensions differ at entry " +
                                  std::to_string(i));
        }
        for (std::size_t k = 0; k < img.size(); ++k) {
            if (gt.pixels()[k]) {
                ++hist.crack_bins[img.pixels()[k]];
            } else {
                ++hist.noncrack_bins[img.pixels()[k]];
            }
        }
    }

    std::uint64_t crack_total = 0;
    std::uint64_t noncrack_total = 0;
    for (int b = 0; b < 256; ++b) {
        crack_total += hist.crack_bins[b];
        noncrack_total += hist.noncrack_bins[b];
    }
    // A class with no pixels has no density; overlap with it is zero.
    if (crack_total > 0 && noncrack_total > 0) {
        double overlap = 0.0;
        for (int b = 0; b < 256; ++b) {
            const double crack_density =
                static_cast<double>(hist.crack_bins[b]) / static_cast<double>(crack_total);
            const double noncrack_density =
                static_cast<double>(hist.noncrack_bins[b]) / static_cast<double>(noncrack_total);
            overlap += std::min(crack_density, noncrack_density);
        }
        hist.overlap = overlap;
    }
    return hist;
}

}  // namespace crackweak
