#include "crackweak/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "crackweak/detail/gaussian.hpp"
#include "crackweak/rng.hpp"

namespace crackweak {

void SynthesisConfig::validate() const {
    if (n_dil < 0) throw ParameterError("n_dil must be non-negative");
    if (!(recall_lo > 0.0 && recall_lo < recall_hi && recall_hi <= 1.0)) {
        throw ParameterError("recall bounds must satisfy 0 < lo < hi <= 1");
    }
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (affine_factor < 0.0) throw ParameterError("affine_factor must be non-negative");
    // equal bounds are allowed and pin alpha to a single value
    if (alpha_lo > alpha_hi) throw ParameterError("alpha_lo must not exceed alpha_hi");
    if (max_trials <= 0) throw ParameterError("max_trials must be positive");
}

BinaryMask dilate(const BinaryMask& mask, int times) {
    if (times < 0) throw ParameterError("dilation count must be non-negative");
    const int w = mask.width();
    const int h = mask.height();
    std::vector<std::uint8_t> cur = mask.pixels();
    std::vector<std::uint8_t> next(cur.size());
    for (int pass = 0; pass < times; ++pass) {
        for (int y = 0; y < h; ++y) {
            const int y0 = std::max(y - 1, 0);
            const int y1 = std::min(y + 1, h - 1);
            for (int x = 0; x < w; ++x) {
                const int x0 = std::max(x - 1, 0);
                const int x1 = std::min(x + 1, w - 1);
                std::uint8_t any = 0;
                for (int yy = y0; yy <= y1 && !any; ++yy) {
                    const std::uint8_t* row = cur.data() + static_cast<std::size_t>(yy) * w;
                    for (int xx = x0; xx <= x1; ++xx) {
                        if (row[xx]) {
                            any = 1;
                            break;
                        }
                    }
                }
                next[static_cast<std::size_t>(y) * w + x] = any;
            }
        }
        cur.swap(next);
    }
    return BinaryMask(w, h, std::move(cur));
}

BinaryMask elastic_transform(const BinaryMask& mask, double alpha, double sigma,
                             double affine_factor, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const int w = mask.width();
    const int h = mask.height();

    // Draw order is fixed: affine parameters, then dx field, then dy field.
    Rng rng(seed);
    const double max_rot = affine_factor * 15.0 * std::numbers::pi / 180.0;
    const double rot = rng.next_range(-max_rot, max_rot);
    const double scale = rng.next_range(1.0 - affine_factor * 0.1, 1.0 + affine_factor * 0.1);
    const double max_shift = affine_factor * 0.02 * std::hypot(double(w), double(h));
    const double tx = rng.next_range(-max_shift, max_shift);
    const double ty = rng.next_range(-max_shift, max_shift);

    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<float> dx(n), dy(n);
    for (auto& v : dx) v = static_cast<float>(rng.next_range(-1.0, 1.0));
    for (auto& v : dy) v = static_cast<float>(rng.next_range(-1.0, 1.0));
    detail::smooth_field(dx, w, h, sigma);
    detail::smooth_field(dy, w, h, sigma);

    // The affine maps output coordinates to source coordinates around the
    // image center; the scaled displacement field is added on top.
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double a11 = scale * std::cos(rot);
    const double a12 = -scale * std::sin(rot);
    const double a21 = scale * std::sin(rot);
    const double a22 = scale * std::cos(rot);

    std::vector<std::uint8_t> out(n);
    const auto& src = mask.pixels();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double rx = x - cx;
            const double ry = y - cy;
            const double sx = a11 * rx + a12 * ry + cx + tx + alpha * dx[i];
            const double sy = a21 * rx + a22 * ry + cy + ty + alpha * dy[i];
            const int ix = std::clamp(static_cast<int>(std::lround(sx)), 0, w - 1);
            const int iy = std::clamp(static_cast<int>(std::lround(sy)), 0, h - 1);
            out[i] = src[static_cast<std::size_t>(iy) * w + ix];
        }
    }
    return BinaryMask(w, h, std::move(out));
}

double recall(const BinaryMask& candidate, const BinaryMask& precise) {
    if (candidate.width() != precise.width() || candidate.height() != precise.height()) {
        throw StructuralError("recall: mask dimensions differ");
    }
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    const auto& c = candidate.pixels();
    const auto& p = precise.pixels();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i]) {
            if (c[i]) {
                ++tp;
            } else {
                ++fn;
            }
        }
    }
    if (tp + fn == 0) return 1.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

SynthesisResult synthesize(const BinaryMask& precise, const SynthesisConfig& config) {
    config.validate();
    if (precise.count_true() == 0) {
        throw InputError("synthesize: precise mask has no crack pixels");
    }

    const BinaryMask dilated = dilate(precise, config.n_dil);

    int lo = config.alpha_lo;
    int hi = config.alpha_hi;
    double best_distance = -1.0;
    BinaryMask best_mask(precise.width(), precise.height());
    SynthesisRecord best_record;

    for (int trial = 0; trial < config.max_trials; ++trial) {
        // Two sub-streams per trial: one for the alpha draw, one for the warp.
        Rng alpha_rng(derive_seed(config.seed, 2 * static_cast<std::uint64_t>(trial)));
        const int alpha = static_cast<int>(alpha_rng.next_int(lo, hi));
        const std::uint64_t warp_seed =
            derive_seed(config.seed, 2 * static_cast<std::uint64_t>(trial) + 1);

        BinaryMask candidate =
            elastic_transform(dilated, alpha, config.sigma, config.affine_factor, warp_seed);
        const double r = recall(candidate, precise);

        SynthesisRecord record{r, alpha, trial + 1, {lo, hi}};
        if (r >= config.recall_lo && r <= config.recall_hi) {
            return SynthesisResult{std::move(candidate), record};
        }

        const double distance = std::max(config.recall_lo - r, r - config.recall_hi);
        if (best_distance < 0.0 || distance < best_distance) {
            best_distance = distance;
            best_mask = std::move(candidate);
            best_record = record;
        }

        // Too little deformation keeps recall high: raise the lower bound.
        // Too much drops recall below the window: lower the upper bound.
        if (r > config.recall_hi) {
            lo = alpha;
        } else {
            hi = alpha;
        }
        if (lo >= hi) {
            lo = config.alpha_lo;  // collapsed: restart from the configured range
            hi = config.alpha_hi;
        }
    }

    best_record.trials = config.max_trials;
    throw SynthesisSearchError(
        "synthesize: no candidate reached recall window [" + std::to_string(config.recall_lo) +
            ", " + std::to_string(config.recall_hi) + "] in " + std::to_string(config.max_trials) +
            " trials (best recall " + std::to_string(best_record.achieved_recall) + ")",
        std::move(best_mask), best_record);
}

}  // namespace crackweak
