#include <doctest.h>

#include "crackweak/rng.hpp"
#include "crackweak/synthesis.hpp"
#include "support/fixtures.hpp"

using namespace crackweak;
using crackweak::testing::random_walk_mask;

namespace {

BinaryMask single_center(int w, int h) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h, 0);
    px[static_cast<std::size_t>(h / 2) * w + w / 2] = 1;
    return BinaryMask(w, h, std::move(px));
}

}  // namespace

TEST_CASE("dilate grows a lone pixel into its 3x3 neighborhood") {
    const BinaryMask mask = single_center(5, 5);
    const BinaryMask out = dilate(mask, 1);
    CHECK(out.count_true() == 9);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
            const bool inside = x >= 1 && x <= 3 && y >= 1 && y <= 3;
            CHECK(out.at(x, y) == inside);
        }
    }
    // two applications cover the whole 5x5 grid
    CHECK(dilate(mask, 2).count_true() == 25);
}

TEST_CASE("dilate fixed points") {
    const BinaryMask empty(6, 4);
    CHECK(dilate(empty, 3) == empty);
    const BinaryMask full(6, 4, std::vector<std::uint8_t>(24, 1));
    CHECK(dilate(full, 3) == full);
    const BinaryMask walk = [&] {
        Rng rng(5);
        return random_walk_mask(rng, 32, 32, 2, 40);
    }();
    CHECK(dilate(walk, 0) == walk);
}

TEST_CASE("dilate composes and never removes pixels") {
    Rng rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const BinaryMask mask = random_walk_mask(rng, 48, 48, 2, 60);
        CHECK(dilate(mask, 3) == dilate(dilate(mask, 2), 1));
        CHECK(dilate(mask, 5) == dilate(dilate(mask, 1), 4));
        for (int n = 0; n <= 4; ++n) {
            const BinaryMask grown = dilate(mask, n);
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (mask.pixels()[i]) CHECK(grown.pixels()[i]);
            }
            CHECK(recall(grown, mask) == 1.0);
        }
    }
}

TEST_CASE("elastic_transform with zero displacement is the identity") {
    Rng rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        const BinaryMask mask = random_walk_mask(rng, 40, 40, 3, 50);
        CHECK(elastic_transform(mask, 0.0, 12.0, 0.0, rng.next_u64()) == mask);
    }
}

TEST_CASE("elastic_transform keeps a constant mask constant") {
    const BinaryMask full(30, 20, std::vector<std::uint8_t>(600, 1));
    CHECK(elastic_transform(full, 800.0, 6.0, 0.2, 99) == full);
    const BinaryMask empty(30, 20);
    CHECK(elastic_transform(empty, 800.0, 6.0, 0.2, 99) == empty);
}

TEST_CASE("elastic_transform is deterministic in the seed") {
    Rng rng(31);
    const BinaryMask mask = random_walk_mask(rng, 64, 64, 3, 100);
    const BinaryMask a = elastic_transform(mask, 300.0, 8.0, 0.2, 1234);
    const BinaryMask b = elastic_transform(mask, 300.0, 8.0, 0.2, 1234);
    CHECK(a == b);
    const BinaryMask c = elastic_transform(mask, 300.0, 8.0, 0.2, 1235);
    CHECK(a != c);  // different stream actually moves pixels
    CHECK(a.width() == mask.width());
    CHECK(a.height() == mask.height());
}

TEST_CASE("elastic_transform rejects non-positive sigma") {
    const BinaryMask mask(4, 4);
    CHECK_THROWS_AS(elastic_transform(mask, 10.0, 0.0, 0.2, 1), ParameterError);
    CHECK_THROWS_AS(elastic_transform(mask, 10.0, -2.0, 0.2, 1), ParameterError);
}

TEST_CASE("recall counts covered crack pixels") {
    const BinaryMask precise(4, 1, {1, 1, 0, 0});
    CHECK(recall(precise, precise) == 1.0);
    CHECK(recall(BinaryMask(4, 1), precise) == 0.0);
    const BinaryMask half(4, 1, {1, 0, 0, 0});
    CHECK(recall(half, precise) == 0.5);
    // false positives in the candidate do not affect recall
    const BinaryMask noisy(4, 1, {1, 0, 1, 1});
    CHECK(recall(noisy, precise) == 0.5);
}

TEST_CASE("recall of anything against an empty precise mask is 1") {
    const BinaryMask empty(3, 3);
    const BinaryMask any(3, 3, {1, 0, 1, 0, 1, 0, 1, 0, 1});
    CHECK(recall(any, empty) == 1.0);
}

TEST_CASE("recall rejects mismatched dimensions") {
    CHECK_THROWS_AS(recall(BinaryMask(3, 3), BinaryMask(3, 4)), StructuralError);
}

TEST_CASE("synthesize lands in the recall window and is reproducible") {
    Rng rng(41);
    SynthesisConfig config;
    config.n_dil = 3;
    config.seed = 2024;

    const BinaryMask precise = random_walk_mask(rng, 128, 128, 3, 220);
    const SynthesisResult first = synthesize(precise, config);
    CHECK(first.record.achieved_recall >= config.recall_lo);
    CHECK(first.record.achieved_recall <= config.recall_hi);
    CHECK(first.record.achieved_recall == recall(first.mask, precise));
    CHECK(first.record.trials >= 1);
    CHECK(first.record.trials <= config.max_trials);
    CHECK(first.record.alpha_used >= config.alpha_lo);
    CHECK(first.record.alpha_used <= config.alpha_hi);

    const SynthesisResult second = synthesize(precise, config);
    CHECK(first.mask == second.mask);
    CHECK(first.record.achieved_recall == second.record.achieved_recall);
    CHECK(first.record.alpha_used == second.record.alpha_used);
    CHECK(first.record.trials == second.record.trials);
    CHECK(first.record.final_bounds == second.record.final_bounds);
}

TEST_CASE("synthesize search matches a step-by-step replay of its contract") {
    // Replays the documented search: per trial t, alpha is drawn from
    // Rng(derive_seed(seed, 2t)) over the current integer bounds, the warp is
    // seeded with derive_seed(seed, 2t+1), and overshooting/undershooting the
    // recall window narrows the bounds (reset when they collapse).
    Rng rng(59);
    const BinaryMask precise = random_walk_mask(rng, 128, 128, 4, 200);
    SynthesisConfig config;
    config.n_dil = 2;
    config.seed = 31415;

    const BinaryMask dilated = dilate(precise, config.n_dil);
    int lo = config.alpha_lo;
    int hi = config.alpha_hi;
    int expected_trials = 0;
    int expected_alpha = -1;
    double expected_recall = -1.0;
    std::pair<int, int> expected_bounds{0, 0};
    BinaryMask expected_mask(1, 1);
    for (int trial = 0; trial < config.max_trials; ++trial) {
        Rng alpha_rng(derive_seed(config.seed, 2 * static_cast<std::uint64_t>(trial)));
        const int alpha = static_cast<int>(alpha_rng.next_int(lo, hi));
        BinaryMask candidate =
            elastic_transform(dilated, alpha, config.sigma, config.affine_factor,
                              derive_seed(config.seed, 2 * static_cast<std::uint64_t>(trial) + 1));
        const double r = recall(candidate, precise);
        if (r >= config.recall_lo && r <= config.recall_hi) {
            expected_trials = trial + 1;
            expected_alpha = alpha;
            expected_recall = r;
            expected_bounds = {lo, hi};
            expected_mask = std::move(candidate);
            break;
        }
        if (r > config.recall_hi) {
            lo = alpha;
        } else {
            hi = alpha;
        }
        if (lo >= hi) {
            lo = config.alpha_lo;
            hi = config.alpha_hi;
        }
    }
    REQUIRE(expected_trials > 0);  // the replay itself must converge

    const SynthesisResult result = synthesize(precise, config);
    CHECK(result.record.trials == expected_trials);
    CHECK(result.record.alpha_used == expected_alpha);
    CHECK(result.record.achieved_recall == expected_recall);
    CHECK(result.record.final_bounds == expected_bounds);
    CHECK(result.mask == expected_mask);
    CHECK(result.record.final_bounds.first >= config.alpha_lo);
    CHECK(result.record.final_bounds.second <= config.alpha_hi);
    CHECK(result.record.alpha_used >= result.record.final_bounds.first);
    CHECK(result.record.alpha_used <= result.record.final_bounds.second);
}

TEST_CASE("synthesize rejects an empty precise mask") {
    SynthesisConfig config;
    config.n_dil = 1;
    CHECK_THROWS_AS(synthesize(BinaryMask(32, 32), config), InputError);
}

TEST_CASE("synthesize fails when the window is unreachable") {
    // alpha pinned to 0 with no affine jitter: every candidate is the
    // undeformed dilation, whose recall is exactly 1.0 > recall_hi.
    Rng rng(43);
    const BinaryMask precise = random_walk_mask(rng, 64, 64, 3, 80);
    SynthesisConfig config;
    config.n_dil = 0;
    config.alpha_lo = 0;
    config.alpha_hi = 0;
    config.affine_factor = 0.0;
    config.max_trials = 8;

    try {
        synthesize(precise, config);
        FAIL("expected SynthesisSearchError");
    } catch (const SynthesisSearchError& e) {
        CHECK(e.best_record.achieved_recall == 1.0);
        CHECK(e.best_record.trials == config.max_trials);
        CHECK(e.best_mask == precise);  // identity transform of the undilated mask
    }
}

TEST_CASE("synthesize validates its config") {
    const BinaryMask mask(8, 8, std::vector<std::uint8_t>(64, 1));
    SynthesisConfig config;
    config.recall_lo = 0.99;
    config.recall_hi = 0.95;
    CHECK_THROWS_AS(synthesize(mask, config), ParameterError);
    config = {};
    config.n_dil = -1;
    CHECK_THROWS_AS(synthesize(mask, config), ParameterError);
    config = {};
    config.alpha_lo = 100;
    config.alpha_hi = 10;
    CHECK_THROWS_AS(synthesize(mask, config), ParameterError);
    config = {};
    config.max_trials = 0;
    CHECK_THROWS_AS(synthesize(mask, config), ParameterError);
}
