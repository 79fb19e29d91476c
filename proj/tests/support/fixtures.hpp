#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "crackweak/raster.hpp"
#include "crackweak/rng.hpp"

namespace crackweak::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("crackweak_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Thin crack-like structure: a meandering random walk stamped with a
/// stroke_width x stroke_width pen.
inline BinaryMask random_walk_mask(Rng& rng, int width, int height, int stroke_width,
                                   int steps) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height, 0);
    double x = rng.next_range(width * 0.2, width * 0.8);
    double y = rng.next_range(height * 0.2, height * 0.8);
    double heading = rng.next_range(0.0, 2.0 * std::numbers::pi);
    const int lo = -(stroke_width - 1) / 2;
    const int hi = stroke_width / 2;
    for (int s = 0; s < steps; ++s) {
        heading += rng.next_range(-0.35, 0.35);
        x = std::clamp(x + std::cos(heading), 1.0, width - 2.0);
        y = std::clamp(y + std::sin(heading), 1.0, height - 2.0);
        const int cx = static_cast<int>(std::lround(x));
        const int cy = static_cast<int>(std::lround(y));
        for (int dy = lo; dy <= hi; ++dy) {
            for (int dx = lo; dx <= hi; ++dx) {
                const int qx = cx + dx;
                const int qy = cy + dy;
                if (qx >= 0 && qx < width && qy >= 0 && qy < height) {
                    px[static_cast<std::size_t>(qy) * width + qx] = 1;
                }
            }
        }
    }
    return BinaryMask(width, height, std::move(px));
}

/// Independent per-pixel coin flips.
inline BinaryMask random_mask(Rng& rng, int width, int height, double density) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
    for (auto& p : px) p = rng.next_unit() < density ? 1 : 0;
    return BinaryMask(width, height, std::move(px));
}

/// Renders a brightness image from a mask: crack pixels drawn uniformly from
/// [crack_lo, crack_hi], background from [bg_lo, bg_hi].
inline GrayImage render_brightness(const BinaryMask& mask, Rng& rng, int crack_lo, int crack_hi,
                                   int bg_lo, int bg_hi) {
    std::vector<std::uint8_t> px(mask.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        const bool crack = mask.pixels()[i] != 0;
        const std::int64_t lo = crack ? crack_lo : bg_lo;
        const std::int64_t hi = crack ? crack_hi : bg_hi;
        px[i] = static_cast<std::uint8_t>(rng.next_int(lo, hi));
    }
    return GrayImage(mask.width(), mask.height(), std::move(px));
}

}  // namespace crackweak::testing
