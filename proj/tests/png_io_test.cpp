#include <doctest.h>

#include <fstream>

#include "crackweak/errors.hpp"
#include "crackweak/png_io.hpp"
#include "support/fixtures.hpp"

using namespace crackweak;
using crackweak::testing::TempDir;

TEST_CASE("gray and rgb PNGs round-trip exactly") {
    TempDir tmp("png");
    Rng rng(2);

    std::vector<std::uint8_t> gpx(17 * 9);
    for (auto& v : gpx) v = static_cast<std::uint8_t>(rng.next_int(0, 255));
    const GrayImage gray(17, 9, gpx);
    write_gray_png(tmp.path() / "gray.png", gray);
    CHECK(read_gray_png(tmp.path() / "gray.png") == gray);

    std::vector<std::uint8_t> cpx(11 * 6 * 3);
    for (auto& v : cpx) v = static_cast<std::uint8_t>(rng.next_int(0, 255));
    const RgbImage rgb(11, 6, cpx);
    write_rgb_png(tmp.path() / "rgb.png", rgb);
    CHECK(read_rgb_png(tmp.path() / "rgb.png") == rgb);

    // read_image_as_gray converts RGB through the default weights
    CHECK(read_image_as_gray(tmp.path() / "rgb.png") == to_gray(rgb));
    CHECK(read_image_as_gray(tmp.path() / "gray.png") == gray);
}

TEST_CASE("read_png_dims reads the header only") {
    TempDir tmp("dims");
    write_gray_png(tmp.path() / "a.png", GrayImage(37, 21));
    const auto [w, h] = read_png_dims(tmp.path() / "a.png");
    CHECK(w == 37);
    CHECK(h == 21);
}

TEST_CASE("mask PNGs binarize at brightness 128") {
    TempDir tmp("mask");
    const GrayImage antialiased(4, 1, {0, 127, 128, 255});
    write_gray_png(tmp.path() / "soft.png", antialiased);
    const BinaryMask mask = read_mask_png(tmp.path() / "soft.png");
    CHECK(mask.pixels() == std::vector<std::uint8_t>{0, 0, 1, 1});

    Rng rng(4);
    const BinaryMask original = testing::random_mask(rng, 13, 8, 0.3);
    write_mask_png(tmp.path() / "mask.png", original);
    CHECK(read_mask_png(tmp.path() / "mask.png") == original);
}

TEST_CASE("prob PNGs are 16-bit and round-trip within 1/65535") {
    TempDir tmp("prob");
    Rng rng(6);
    std::vector<float> px(23 * 7);
    for (auto& p : px) p = static_cast<float>(rng.next_unit());
    px[0] = 0.0f;
    px[1] = 1.0f;
    const ProbMap original(23, 7, px);

    write_prob_png(tmp.path() / "p.png", original);
    const ProbMap loaded = read_prob_png(tmp.path() / "p.png");
    REQUIRE(loaded.width() == 23);
    REQUIRE(loaded.height() == 7);
    CHECK(loaded.at(0, 0) == 0.0f);
    CHECK(loaded.at(1, 0) == 1.0f);
    for (std::size_t i = 0; i < px.size(); ++i) {
        CHECK(std::abs(loaded.pixels()[i] - px[i]) <= 1.0f / 65535.0f);
    }
}

TEST_CASE("quantize16 equals the file round trip exactly") {
    TempDir tmp("quant");
    Rng rng(8);
    std::vector<float> px(9 * 5);
    for (auto& p : px) p = static_cast<float>(rng.next_unit());
    const ProbMap original(9, 5, px);

    write_prob_png(tmp.path() / "q.png", original);
    const ProbMap loaded = read_prob_png(tmp.path() / "q.png");
    const ProbMap snapped = quantize16(original);
    CHECK(loaded == snapped);
    CHECK(quantize16(snapped) == snapped);  // idempotent
}

TEST_CASE("PNG readers raise distinct errors") {
    TempDir tmp("pngerr");

    CHECK_THROWS_AS(read_gray_png(tmp.path() / "missing.png"), FileMissingError);
    CHECK_THROWS_AS(read_png_dims(tmp.path() / "missing.png"), FileMissingError);

    std::ofstream junk(tmp.path() / "junk.png");
    junk << "this is not a png";
    junk.close();
    CHECK_THROWS_AS(read_gray_png(tmp.path() / "junk.png"), FileFormatError);
    CHECK_THROWS_AS(read_png_dims(tmp.path() / "junk.png"), FileFormatError);

    write_rgb_png(tmp.path() / "rgb.png", RgbImage(3, 3));
    CHECK_THROWS_AS(read_gray_png(tmp.path() / "rgb.png"), FileFormatError);
    CHECK_THROWS_AS(read_prob_png(tmp.path() / "rgb.png"), FileFormatError);
    write_gray_png(tmp.path() / "gray.png", GrayImage(3, 3));
    CHECK_THROWS_AS(read_rgb_png(tmp.path() / "gray.png"), FileFormatError);
}
