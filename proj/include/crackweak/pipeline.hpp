#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crackweak/dataset.hpp"
#include "crackweak/fusion_eval.hpp"
#include "crackweak/macro_branch.hpp"
#include "crackweak/micro_branch.hpp"
#include "crackweak/synthesis.hpp"

namespace crackweak {

/// Everything an end-to-end run needs. All randomness enters through
/// synthesis.seed; the evaluation path is RNG-free.
struct PipelineConfig {
    SynthesisConfig synthesis;
    MicroConfig micro;
    MacroSource macro;
    double threshold = 0.5;
    std::filesystem::path output_dir;
    bool use_micro = true;  // false fuses against an all-ones map (Macro-only evaluation)
    int jobs = 1;
    std::optional<std::vector<double>> sweep_grid;

    // Dataset location, used by the `run` and `synth` commands.
    std::filesystem::path dataset_root;          // directory layout ...
    std::filesystem::path dataset_manifest;      // ... or explicit JSON manifest
    std::optional<std::filesystem::path> split_file;
};

/// Parses a JSON pipeline config. Relative paths resolve against the config
/// file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Loads the manifest named by the config (JSON manifest when given,
/// directory convention otherwise).
DatasetManifest load_configured_manifest(const PipelineConfig& config);

/// Runs macro + micro + fusion + thresholding + scoring over the test split,
/// writing every intermediate raster (macro/, micro/, fused/, pred/) and
/// report.json under config.output_dir. Deterministic given the config, and
/// computed at the persisted 16-bit map precision so chaining the individual
/// CLI stages through files reproduces it bit for bit.
EvalReport run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config);

/// One synthesized annotation per train-split entry.
struct SynthesisLogLine {
    std::string file;  // output file name, <image_id>.png
    SynthesisRecord record;
};

/// Synthesizes low-quality annotations for every train-split entry (test
/// entries are never touched), writing masks to out_dir plus a
/// synthesis_log.jsonl with one record per image. Per-image randomness is
/// derived from (config.seed, image_id) so results do not depend on which
/// other images are present.
std::vector<SynthesisLogLine> synth_dataset(const DatasetManifest& manifest,
                                            const SynthesisConfig& config,
                                            const std::filesystem::path& out_dir, int jobs = 1);

/// Scores a directory of predictions (masks or probability maps) against a
/// directory of annotation masks, paired by file stem. Probability inputs are
/// thresholded at `t`; optional grid adds a threshold sweep to the report.
EvalReport evaluate_dirs(const std::filesystem::path& pred_dir,
                         const std::filesystem::path& gt_dir, double t,
                         const std::optional<std::vector<double>>& sweep_grid = {});

/// Serialized EvalReport, stable across identical runs.
std::string report_to_json(const EvalReport& report);

/// report_to_json to a file, creating parent directories.
void write_report_json(const std::filesystem::path& path, const EvalReport& report);

/// Sweep curve as "threshold,macro_f1" CSV.
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);

/// Sorted .png files directly under dir.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

/// Default sweep grid: 0.00, 0.01, ..., 1.00.
std::vector<double> default_sweep_grid();

}  // namespace crackweak
