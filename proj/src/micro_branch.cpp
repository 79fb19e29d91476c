#include "crackweak/micro_branch.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "crackweak/detail/gaussian.hpp"
#include "crackweak/errors.hpp"

namespace crackweak {

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    std::vector<double> buf(image.pixels().begin(), image.pixels().end());
    detail::smooth_buffer(buf, image.width(), image.height(), sigma);
    std::vector<std::uint8_t> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const long v = std::lround(buf[i]);
        out[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
    return GrayImage(image.width(), image.height(), std::move(out));
}

ProbMap micro_prob(const GrayImage& image, const MicroConfig& config) {
    if (config.smoothing_sigma < 0.0) throw ParameterError("smoothing_sigma must be >= 0");
    const GrayImage* input = &image;
    GrayImage smoothed(1, 1);
    if (config.smoothing_sigma > 0.0) {
        smoothed = gaussian_blur(image, config.smoothing_sigma);
        input = &smoothed;
    }

    std::vector<float> probs(input->size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = static_cast<float>(255 - input->pixels()[i]) / 255.0f;
    }

    if (config.normalize_per_image) {
        const auto [lo_it, hi_it] = std::minmax_element(probs.begin(), probs.end());
        const float lo = *lo_it;
        const float hi = *hi_it;
        if (hi > lo) {
            for (auto& p : probs) p = (p - lo) / (hi - lo);
        } else {
            std::fill(probs.begin(), probs.end(), 0.5f);  // constant image: no signal
        }
    }
    return ProbMap(input->width(), input->height(), std::move(probs));
}

}  // namespace crackweak
