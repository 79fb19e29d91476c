#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "crackweak/dataset.hpp"
#include "crackweak/detail/parallel.hpp"
#include "crackweak/errors.hpp"
#include "crackweak/fusion_eval.hpp"
#include "crackweak/macro_branch.hpp"
#include "crackweak/micro_branch.hpp"
#include "crackweak/pipeline.hpp"
#include "crackweak/png_io.hpp"
#include "crackweak/raster.hpp"
#include "crackweak/synthesis.hpp"

namespace fs = std::filesystem;
using namespace crackweak;

namespace {

std::string error_type_name(const Error& e) {
    if (dynamic_cast<const StructuralError*>(&e)) return "structural";
    if (dynamic_cast<const ParameterError*>(&e)) return "parameter";
    if (dynamic_cast<const InputError*>(&e)) return "input";
    if (dynamic_cast<const FileMissingError*>(&e)) return "file_missing";
    if (dynamic_cast<const FileFormatError*>(&e)) return "file_format";
    if (dynamic_cast<const SynthesisSearchError*>(&e)) return "synthesis_search";
    return "error";
}

void print_error_json(const std::string& type, const std::string& message) {
    nlohmann::json doc{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << doc.dump() << std::endl;
}

struct SynthCli {
    std::string dataset_root;
    std::string manifest_json;
    std::string annotations_dir;
    std::string split_file;
    std::string out_dir;
    std::string config_path;
    SynthesisConfig synthesis;
    int jobs = 1;
};

DatasetManifest manifest_from_annotations(const fs::path& dir) {
    DatasetManifest manifest;
    for (const auto& path : list_pngs(dir)) {
        manifest.entries.push_back(
            ManifestEntry{path.stem().string(), path, path, Split::train});
    }
    if (manifest.entries.empty()) throw InputError("no .png annotations under " + dir.string());
    return manifest;
}

void cmd_synth(const SynthCli& cli, const CLI::App* cmd) {
    std::optional<PipelineConfig> file_config;
    if (!cli.config_path.empty()) file_config = load_pipeline_config(cli.config_path);

    // config file supplies the base settings, explicit flags win
    SynthesisConfig config = file_config ? file_config->synthesis : SynthesisConfig{};
    const auto override_if_set = [&](const std::string& flag, auto member) {
        if (cmd->count(flag) > 0) config.*member = cli.synthesis.*member;
    };
    override_if_set("--n-dil", &SynthesisConfig::n_dil);
    override_if_set("--seed", &SynthesisConfig::seed);
    override_if_set("--recall-lo", &SynthesisConfig::recall_lo);
    override_if_set("--recall-hi", &SynthesisConfig::recall_hi);
    override_if_set("--sigma", &SynthesisConfig::sigma);
    override_if_set("--affine-factor", &SynthesisConfig::affine_factor);
    override_if_set("--alpha-lo", &SynthesisConfig::alpha_lo);
    override_if_set("--alpha-hi", &SynthesisConfig::alpha_hi);
    override_if_set("--max-trials", &SynthesisConfig::max_trials);

    std::optional<fs::path> split;
    if (!cli.split_file.empty()) split = cli.split_file;

    DatasetManifest manifest;
    if (!cli.annotations_dir.empty()) {
        manifest = manifest_from_annotations(cli.annotations_dir);
    } else if (!cli.manifest_json.empty()) {
        manifest = load_manifest_json(cli.manifest_json, split);
    } else if (!cli.dataset_root.empty()) {
        manifest = load_manifest(cli.dataset_root, split);
    } else if (file_config) {
        manifest = load_configured_manifest(*file_config);
    } else {
        throw ParameterError("synth needs --dataset, --manifest, --annotations or --config");
    }

    const auto log = synth_dataset(manifest, config, cli.out_dir, cli.jobs);
    std::cout << "synthesized " << log.size() << " annotation(s) -> " << cli.out_dir << "\n";
}

struct MicroCli {
    std::string images_dir;
    std::string out_dir;
    double sigma = 0.0;
    bool normalize = false;
    int jobs = 1;
};

void cmd_micro(const MicroCli& cli) {
    const MicroConfig config{cli.sigma, cli.normalize};
    const auto files = list_pngs(cli.images_dir);
    if (files.empty()) throw InputError("no .png images under " + cli.images_dir);
    fs::create_directories(cli.out_dir);
    detail::parallel_for(files.size(), cli.jobs, [&](std::size_t i) {
        const GrayImage image = read_image_as_gray(files[i]);
        write_prob_png(fs::path(cli.out_dir) / files[i].filename(), micro_prob(image, config));
    });
    std::cout << "wrote " << files.size() << " probability map(s) -> " << cli.out_dir << "\n";
}

struct MacroCli {
    std::string images_dir;
    std::string out_dir;
    std::string source = "baseline";
    std::string external_dir;
    double bg_sigma = 20.0;
    double contrast = 60.0;
    int jobs = 1;
};

void cmd_macro(const MacroCli& cli) {
    const auto files = list_pngs(cli.images_dir);
    if (files.empty()) throw InputError("no .png images under " + cli.images_dir);
    fs::create_directories(cli.out_dir);

    if (cli.source == "baseline") {
        const BaselineParams params{cli.bg_sigma, cli.contrast};
        detail::parallel_for(files.size(), cli.jobs, [&](std::size_t i) {
            const GrayImage image = read_image_as_gray(files[i]);
            write_prob_png(fs::path(cli.out_dir) / files[i].filename(),
                           classical_baseline(image, params));
        });
    } else if (cli.source == "external") {
        if (cli.external_dir.empty()) throw ParameterError("--source external needs --dir");
        detail::parallel_for(files.size(), cli.jobs, [&](std::size_t i) {
            const auto [w, h] = read_png_dims(files[i]);
            const ProbMap map =
                load_prob_map(fs::path(cli.external_dir) / files[i].filename(), w, h);
            write_prob_png(fs::path(cli.out_dir) / files[i].filename(), map);
        });
    } else {
        throw ParameterError("unknown macro source '" + cli.source + "'");
    }
    std::cout << "wrote " << files.size() << " probability map(s) -> " << cli.out_dir << "\n";
}

struct FuseCli {
    std::string macro_dir;
    std::string micro_dir;
    std::string out_dir;
    int jobs = 1;
};

void cmd_fuse(const FuseCli& cli) {
    const auto macro_files = list_pngs(cli.macro_dir);
    if (macro_files.empty()) throw InputError("no .png maps under " + cli.macro_dir);
    fs::create_directories(cli.out_dir);
    detail::parallel_for(macro_files.size(), cli.jobs, [&](std::size_t i) {
        const fs::path micro_path = fs::path(cli.micro_dir) / macro_files[i].filename();
        if (!fs::is_regular_file(micro_path)) {
            throw FileMissingError("no matching map " + micro_path.string());
        }
        const ProbMap macro_map = read_prob_png(macro_files[i]);
        const ProbMap micro_map = read_prob_png(micro_path);
        write_prob_png(fs::path(cli.out_dir) / macro_files[i].filename(),
                       fuse(macro_map, micro_map));
    });
    std::cout << "fused " << macro_files.size() << " map pair(s) -> " << cli.out_dir << "\n";
}

struct EvalCli {
    std::string pred_dir;
    std::string gt_dir;
    std::string report_path = "report.json";
    std::string sweep_csv_path;
    double threshold = 0.5;
    bool sweep = false;
    double sweep_start = 0.0;
    double sweep_stop = 1.0;
    double sweep_step = 0.01;
};

void cmd_eval(const EvalCli& cli) {
    std::optional<std::vector<double>> grid;
    if (cli.sweep) {
        if (!(cli.sweep_step > 0.0)) throw ParameterError("--sweep-step must be positive");
        std::vector<double> g;
        for (double t = cli.sweep_start; t <= cli.sweep_stop + 1e-12; t += cli.sweep_step) {
            g.push_back(std::min(t, 1.0));
        }
        grid = std::move(g);
    }
    const EvalReport report = evaluate_dirs(cli.pred_dir, cli.gt_dir, cli.threshold, grid);
    write_report_json(cli.report_path, report);
    if (report.sweep && !cli.sweep_csv_path.empty()) {
        write_sweep_csv(cli.sweep_csv_path, *report.sweep);
    }
    std::cout << "images: " << report.scores.size() << "\n"
              << "macro_f1: " << report.macro_f1 << "\n"
              << "micro_f1: " << report.micro_f1 << "\n";
    if (report.sweep) {
        std::cout << "best_threshold: " << report.sweep->best().threshold << "\n"
                  << "best_macro_f1: " << report.sweep->best().macro_f1 << "\n";
    }
}

struct HistCli {
    std::string images_dir;
    std::string gt_dir;
    std::string out_csv;
};

void cmd_hist(const HistCli& cli) {
    std::vector<GrayImage> images;
    std::vector<BinaryMask> gts;
    for (const auto& gt_path : list_pngs(cli.gt_dir)) {
        const fs::path image_path = fs::path(cli.images_dir) / gt_path.filename();
        if (!fs::is_regular_file(image_path)) {
            throw FileMissingError("no matching image " + image_path.string());
        }
        images.push_back(read_image_as_gray(image_path));
        gts.push_back(read_mask_png(gt_path));
    }
    if (images.empty()) throw InputError("no .png annotations under " + cli.gt_dir);

    const BrightnessHistogram hist = brightness_histograms(images, gts);
    std::uint64_t crack_total = 0;
    std::uint64_t noncrack_total = 0;
    for (int b = 0; b < 256; ++b) {
        crack_total += hist.crack_bins[b];
        noncrack_total += hist.noncrack_bins[b];
    }

    const fs::path out(cli.out_csv);
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    std::ofstream csv(out);
    if (!csv) throw FileMissingError("cannot write " + cli.out_csv);
    csv << "# overlap," << hist.overlap << "\n";
    csv << "brightness,crack_count,noncrack_count,crack_density,noncrack_density\n";
    for (int b = 0; b < 256; ++b) {
        const double crack_density =
            crack_total ? static_cast<double>(hist.crack_bins[b]) / crack_total : 0.0;
        const double noncrack_density =
            noncrack_total ? static_cast<double>(hist.noncrack_bins[b]) / noncrack_total : 0.0;
        csv << b << "," << hist.crack_bins[b] << "," << hist.noncrack_bins[b] << ","
            << crack_density << "," << noncrack_density << "\n";
    }
    std::cout << "overlap: " << hist.overlap << "\n";
}

struct RunCli {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

void cmd_run(const RunCli& cli) {
    PipelineConfig config = load_pipeline_config(cli.config_path);
    if (cli.seed) config.synthesis.seed = *cli.seed;
    if (cli.jobs) config.jobs = *cli.jobs;

    const DatasetManifest manifest = load_configured_manifest(config);
    const EvalReport report = run_pipeline(manifest, config);
    std::cout << "test images: " << report.scores.size() << "\n"
              << "threshold: " << report.threshold << "\n"
              << "macro_f1: " << report.macro_f1 << "\n"
              << "micro_f1: " << report.micro_f1 << "\n";
    if (report.sweep) {
        std::cout << "best_threshold: " << report.sweep->best().threshold << "\n"
                  << "best_macro_f1: " << report.sweep->best().macro_f1 << "\n";
    }
    std::cout << "report: " << (config.output_dir / "report.json").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crackweak - weakly-supervised crack detection toolkit"};
    app.require_subcommand(1);

    SynthCli synth;
    auto* synth_cmd =
        app.add_subcommand("synth", "Synthesize low-quality annotations from precise masks");
    synth_cmd->add_option("--dataset", synth.dataset_root, "Dataset root (images/ + annotations/)");
    synth_cmd->add_option("--manifest", synth.manifest_json, "Explicit JSON manifest");
    synth_cmd->add_option("--annotations", synth.annotations_dir,
                          "Directory of precise annotation PNGs (all treated as train)");
    synth_cmd->add_option("--split-file", synth.split_file, "Test split file (one id per line)");
    synth_cmd->add_option("--config", synth.config_path, "Pipeline config JSON");
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->add_option("--n-dil", synth.synthesis.n_dil, "Number of dilations")->required();
    synth_cmd->add_option("--seed", synth.synthesis.seed, "Random seed");
    synth_cmd->add_option("--recall-lo", synth.synthesis.recall_lo, "Recall window lower bound");
    synth_cmd->add_option("--recall-hi", synth.synthesis.recall_hi, "Recall window upper bound");
    synth_cmd->add_option("--sigma", synth.synthesis.sigma, "Displacement field smoothness");
    synth_cmd->add_option("--affine-factor", synth.synthesis.affine_factor,
                          "Random affine strength");
    synth_cmd->add_option("--alpha-lo", synth.synthesis.alpha_lo, "Initial alpha lower bound");
    synth_cmd->add_option("--alpha-hi", synth.synthesis.alpha_hi, "Initial alpha upper bound");
    synth_cmd->add_option("--max-trials", synth.synthesis.max_trials, "Search trial cap");
    synth_cmd->add_option("--jobs", synth.jobs, "Worker threads");
    synth_cmd->callback([&, synth_cmd] { cmd_synth(synth, synth_cmd); });

    MicroCli micro;
    auto* micro_cmd = app.add_subcommand("micro", "Per-pixel darkness probability maps");
    micro_cmd->add_option("--images", micro.images_dir, "Input image directory")->required();
    micro_cmd->add_option("--out", micro.out_dir, "Output directory")->required();
    micro_cmd->add_option("--sigma", micro.sigma, "Smoothing sigma (0 = none)");
    micro_cmd->add_flag("--normalize", micro.normalize, "Min-max normalize per image");
    micro_cmd->add_option("--jobs", micro.jobs, "Worker threads");
    micro_cmd->callback([&] { cmd_micro(micro); });

    MacroCli macro;
    auto* macro_cmd = app.add_subcommand("macro", "Macro branch probability maps");
    macro_cmd->add_option("--images", macro.images_dir, "Input image directory")->required();
    macro_cmd->add_option("--out", macro.out_dir, "Output directory")->required();
    macro_cmd->add_option("--source", macro.source, "Map source: baseline or external");
    macro_cmd->add_option("--dir", macro.external_dir, "External map directory");
    macro_cmd->add_option("--bg-sigma", macro.bg_sigma, "Baseline background blur sigma");
    macro_cmd->add_option("--contrast", macro.contrast, "Baseline contrast scale");
    macro_cmd->add_option("--jobs", macro.jobs, "Worker threads");
    macro_cmd->callback([&] { cmd_macro(macro); });

    FuseCli fuse_cli;
    auto* fuse_cmd = app.add_subcommand("fuse", "Multiply two probability map directories");
    fuse_cmd->add_option("--macro", fuse_cli.macro_dir, "Macro map directory")->required();
    fuse_cmd->add_option("--micro", fuse_cli.micro_dir, "Micro map directory")->required();
    fuse_cmd->add_option("--out", fuse_cli.out_dir, "Output directory")->required();
    fuse_cmd->add_option("--jobs", fuse_cli.jobs, "Worker threads");
    fuse_cmd->callback([&] { cmd_fuse(fuse_cli); });

    EvalCli eval_cli;
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against annotations");
    eval_cmd->add_option("--pred", eval_cli.pred_dir, "Predictions (masks or probability maps)")
        ->required();
    eval_cmd->add_option("--gt", eval_cli.gt_dir, "Annotation mask directory")->required();
    eval_cmd->add_option("--threshold", eval_cli.threshold, "Operating threshold");
    eval_cmd->add_option("--report", eval_cli.report_path, "Report JSON path");
    eval_cmd->add_flag("--sweep", eval_cli.sweep, "Also sweep thresholds");
    eval_cmd->add_option("--sweep-start", eval_cli.sweep_start, "Sweep grid start");
    eval_cmd->add_option("--sweep-stop", eval_cli.sweep_stop, "Sweep grid stop");
    eval_cmd->add_option("--sweep-step", eval_cli.sweep_step, "Sweep grid step");
    eval_cmd->add_option("--sweep-csv", eval_cli.sweep_csv_path, "Sweep curve CSV path");
    eval_cmd->callback([&] { cmd_eval(eval_cli); });

    HistCli hist;
    auto* hist_cmd = app.add_subcommand("hist", "Brightness histograms by annotation class");
    hist_cmd->add_option("--images", hist.images_dir, "Image directory")->required();
    hist_cmd->add_option("--gt", hist.gt_dir, "Annotation mask directory")->required();
    hist_cmd->add_option("--out", hist.out_csv, "Output CSV path")->required();
    hist_cmd->callback([&] { cmd_hist(hist); });

    RunCli run;
    auto* run_cmd = app.add_subcommand("run", "End-to-end pipeline over a dataset");
    run_cmd->add_option("--config", run.config_path, "Pipeline config JSON")->required();
    run_cmd->add_option("--seed", run.seed, "Override config seed");
    run_cmd->add_option("--jobs", run.jobs, "Override config worker threads");
    run_cmd->callback([&] { cmd_run(run); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        print_error_json("usage", e.what());
        return e.get_exit_code();
    } catch (const Error& e) {
        print_error_json(error_type_name(e), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return 1;
    }
    return 0;
}
