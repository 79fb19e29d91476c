#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "crackweak/pipeline.hpp"
#include "crackweak/png_io.hpp"
#include "support/fixtures.hpp"

using namespace crackweak;
using crackweak::testing::TempDir;

namespace {

const std::string kCli = CRACKWEAK_CLI_PATH;

int run_cli(const std::string& args, const std::filesystem::path& stderr_to = {}) {
    std::string command = "'" + kCli + "' " + args + " > /dev/null";
    command += stderr_to.empty() ? " 2> /dev/null" : (" 2> '" + stderr_to.string() + "'");
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void build_dataset(const std::filesystem::path& root, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream split(root / "split.txt");
    for (int i = 0; i < 5; ++i) {
        const std::string id = (i < 3 ? "tr" : "te") + std::to_string(i);
        const BinaryMask gt = testing::random_walk_mask(rng, 96, 96, 3, 150);
        const GrayImage image = testing::render_brightness(gt, rng, 0, 80, 120, 255);
        write_gray_png(root / "images" / (id + ".png"), image);
        write_mask_png(root / "annotations" / (id + ".png"), gt);
        if (i >= 3) split << id << "\n";
    }
}

}  // namespace

TEST_CASE("chained CLI subcommands reproduce `run` bit for bit") {
    TempDir tmp("cli_chain");
    build_dataset(tmp.path(), 4242);

    std::ofstream cfg(tmp.path() / "config.json");
    cfg << R"({
  "output_dir": "run_out",
  "threshold": 0.5,
  "jobs": 2,
  "dataset": {"root": ".", "split_file": "split.txt"},
  "macro": {"source": "baseline", "background_sigma": 6.0, "contrast_scale": 80.0}
})";
    cfg.close();

    REQUIRE(run_cli("run --config '" + (tmp.path() / "config.json").string() + "'") == 0);

    // the same stages by hand, exchanging files between subcommands
    std::filesystem::create_directories(tmp.path() / "chain" / "images");
    std::filesystem::create_directories(tmp.path() / "chain" / "gt");
    for (const std::string id : {"te3", "te4"}) {
        std::filesystem::copy_file(tmp.path() / "images" / (id + ".png"),
                                   tmp.path() / "chain" / "images" / (id + ".png"));
        std::filesystem::copy_file(tmp.path() / "annotations" / (id + ".png"),
                                   tmp.path() / "chain" / "gt" / (id + ".png"));
    }
    const std::string chain = (tmp.path() / "chain").string();
    REQUIRE(run_cli("macro --images '" + chain + "/images' --out '" + chain +
                    "/macro' --source baseline --bg-sigma 6 --contrast 80") == 0);
    REQUIRE(run_cli("micro --images '" + chain + "/images' --out '" + chain + "/micro'") == 0);
    REQUIRE(run_cli("fuse --macro '" + chain + "/macro' --micro '" + chain + "/micro' --out '" +
                    chain + "/fused'") == 0);
    REQUIRE(run_cli("eval --pred '" + chain + "/fused' --gt '" + chain +
                    "/gt' --threshold 0.5 --report '" + chain + "/report.json'") == 0);

    for (const std::string id : {"te3", "te4"}) {
        for (const std::string stage : {"macro", "micro", "fused"}) {
            CHECK(slurp(tmp.path() / "chain" / stage / (id + ".png")) ==
                  slurp(tmp.path() / "run_out" / stage / (id + ".png")));
        }
    }

    const auto run_report = nlohmann::json::parse(slurp(tmp.path() / "run_out" / "report.json"));
    const auto chain_report = nlohmann::json::parse(slurp(tmp.path() / "chain" / "report.json"));
    CHECK(run_report["macro_f1"] == chain_report["macro_f1"]);
    CHECK(run_report["micro_f1"] == chain_report["micro_f1"]);
    CHECK(run_report["scores"] == chain_report["scores"]);
}

TEST_CASE("synth CLI writes masks and a JSONL log for the train split only") {
    TempDir tmp("cli_synth");
    build_dataset(tmp.path(), 5151);

    const std::string out = (tmp.path() / "synth_out").string();
    REQUIRE(run_cli("synth --dataset '" + tmp.path().string() + "' --split-file '" +
                    (tmp.path() / "split.txt").string() + "' --n-dil 2 --seed 9 --out '" + out +
                    "' --jobs 2") == 0);

    for (const std::string id : {"tr0", "tr1", "tr2"}) {
        CHECK(std::filesystem::is_regular_file(tmp.path() / "synth_out" / (id + ".png")));
    }
    CHECK_FALSE(std::filesystem::exists(tmp.path() / "synth_out" / "te3.png"));

    std::ifstream log(tmp.path() / "synth_out" / "synthesis_log.jsonl");
    REQUIRE(log);
    int lines = 0;
    std::string line;
    while (std::getline(log, line)) {
        const auto obj = nlohmann::json::parse(line);
        const double r = obj.at("achieved_recall").get<double>();
        CHECK(r >= 0.925);
        CHECK(r <= 0.975);
        ++lines;
    }
    CHECK(lines == 3);
}

TEST_CASE("synth CLI takes defaults from a config file, flags win") {
    TempDir tmp("cli_synth_cfg");
    build_dataset(tmp.path(), 6161);

    std::ofstream cfg(tmp.path() / "config.json");
    cfg << R"({
  "output_dir": "unused",
  "dataset": {"root": ".", "split_file": "split.txt"},
  "synthesis": {"n_dil": 2, "seed": 9}
})";
    cfg.close();

    REQUIRE(run_cli("synth --config '" + (tmp.path() / "config.json").string() + "' --n-dil 2" +
                    " --out '" + (tmp.path() / "from_config").string() + "'") == 0);
    REQUIRE(run_cli("synth --dataset '" + tmp.path().string() + "' --split-file '" +
                    (tmp.path() / "split.txt").string() + "' --n-dil 2 --seed 9 --out '" +
                    (tmp.path() / "from_flags").string() + "'") == 0);

    // same effective settings either way
    for (const std::string id : {"tr0", "tr1", "tr2"}) {
        CHECK(slurp(tmp.path() / "from_config" / (id + ".png")) ==
              slurp(tmp.path() / "from_flags" / (id + ".png")));
    }
}

TEST_CASE("CLI failures exit nonzero with machine-readable JSON on stderr") {
    TempDir tmp("cli_err");

    const auto stderr_path = tmp.path() / "stderr.txt";
    const int code =
        run_cli("eval --pred '" + (tmp.path() / "nope").string() + "' --gt '" +
                (tmp.path() / "nope").string() + "'", stderr_path);
    CHECK(code == 1);
    const auto doc = nlohmann::json::parse(slurp(stderr_path));
    CHECK(doc.at("error").at("type") == "file_missing");
    CHECK(doc.at("error").contains("message"));

    // bad usage also reports JSON
    const int usage = run_cli("eval --no-such-flag", stderr_path);
    CHECK(usage != 0);
    const auto usage_doc = nlohmann::json::parse(slurp(stderr_path));
    CHECK(usage_doc.at("error").at("type") == "usage");

    CHECK(run_cli("--help") == 0);
}
