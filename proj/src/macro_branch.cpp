#include "crackweak/macro_branch.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "crackweak/errors.hpp"
#include "crackweak/micro_branch.hpp"
#include "crackweak/png_io.hpp"

namespace crackweak {

ProbMap load_prob_map(const std::filesystem::path& path, int expected_width,
                      int expected_height) {
    ProbMap map = read_prob_png(path);
    if (map.width() != expected_width || map.height() != expected_height) {
        throw StructuralError(path.string() + ": map is " + std::to_string(map.width()) + "x" +
                              std::to_string(map.height()) + ", expected " +
                              std::to_string(expected_width) + "x" +
                              std::to_string(expected_height));
    }
    return map;
}

ProbMap classical_baseline(const GrayImage& image, const BaselineParams& params) {
    if (!(params.background_sigma > 0.0)) throw ParameterError("background_sigma must be positive");
    if (!(params.contrast_scale > 0.0)) throw ParameterError("contrast_scale must be positive");

    const GrayImage background = gaussian_blur(image, params.background_sigma);
    std::vector<float> probs(image.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double deficit = static_cast<double>(background.pixels()[i]) - image.pixels()[i];
        probs[i] = static_cast<float>(std::clamp(deficit / params.contrast_scale, 0.0, 1.0));
    }
    return ProbMap(image.width(), image.height(), std::move(probs));
}

}  // namespace crackweak
