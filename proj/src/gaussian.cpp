#include "crackweak/detail/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "crackweak/errors.hpp"

namespace crackweak::detail {

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
        taps[radius + k] = w;
        sum += w;
    }
    for (auto& w : taps) w /= sum;
    return taps;
}

namespace {

// One separable pass along x then y. T is float or double.
template <typename T>
void smooth_impl(std::vector<T>& buf, int width, int height, double sigma) {
    const auto kernel_d = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel_d.size() / 2);
    std::vector<T> taps(kernel_d.begin(), kernel_d.end());
    std::vector<T> tmp(buf.size());

    // Horizontal pass reads from a border-replicated copy of each row so the
    // inner dot product carries no clamping branches.
    std::vector<T> padded(static_cast<std::size_t>(width) + 2 * radius);
    for (int y = 0; y < height; ++y) {
        const T* row = buf.data() + static_cast<std::size_t>(y) * width;
        std::fill(padded.begin(), padded.begin() + radius, row[0]);
        std::copy(row, row + width, padded.begin() + radius);
        std::fill(padded.begin() + radius + width, padded.end(), row[width - 1]);
        T* out = tmp.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            T acc = 0;
            const T* window = padded.data() + x;
            for (int k = 0; k <= 2 * radius; ++k) acc += taps[k] * window[k];
            out[x] = acc;
        }
    }
    // Vertical pass accumulates whole rows so the inner loop stays contiguous.
    for (int y = 0; y < height; ++y) {
        T* out = buf.data() + static_cast<std::size_t>(y) * width;
        std::fill(out, out + width, T(0));
        for (int k = -radius; k <= radius; ++k) {
            const int sy = std::clamp(y + k, 0, height - 1);
            const T w = taps[radius + k];
            const T* src = tmp.data() + static_cast<std::size_t>(sy) * width;
            for (int x = 0; x < width; ++x) out[x] += w * src[x];
        }
    }
}

}  // namespace

void smooth_field(std::vector<float>& field, int width, int height, double sigma) {
    smooth_impl(field, width, height, sigma);
}

void smooth_buffer(std::vector<double>& buffer, int width, int height, double sigma) {
    smooth_impl(buffer, width, height, sigma);
}

}  // namespace crackweak::detail
