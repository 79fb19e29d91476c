#include "crackweak/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "crackweak/detail/parallel.hpp"
#include "crackweak/errors.hpp"
#include "crackweak/png_io.hpp"
#include "crackweak/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace crackweak {

namespace {

// Rethrows domain errors with the failing image id attached.
template <typename Fn>
auto with_image_context(const std::string& image_id, Fn&& fn) {
    try {
        return fn();
    } catch (const SynthesisSearchError& e) {
        throw SynthesisSearchError("image '" + image_id + "': " + e.what(), e.best_mask,
                                   e.best_record);
    } catch (const StructuralError& e) {
        throw StructuralError("image '" + image_id + "': " + e.what());
    } catch (const ParameterError& e) {
        throw ParameterError("image '" + image_id + "': " + e.what());
    } catch (const InputError& e) {
        throw InputError("image '" + image_id + "': " + e.what());
    } catch (const FileMissingError& e) {
        throw FileMissingError("image '" + image_id + "': " + e.what());
    } catch (const FileFormatError& e) {
        throw FileFormatError("image '" + image_id + "': " + e.what());
    }
}

std::uint64_t image_seed(std::uint64_t base_seed, const std::string& image_id) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a over the id, mixed with the base seed
    for (unsigned char c : image_id) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return derive_seed(base_seed, h);
}

fs::path resolve_against(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<fs::path> list_pngs(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw FileMissingError("not a directory: " + dir.string());
    }
    std::set<fs::path> sorted;
    for (const auto& de : fs::directory_iterator(dir)) {
        if (de.is_regular_file() && de.path().extension() == ".png") {
            sorted.insert(de.path());
        }
    }
    return {sorted.begin(), sorted.end()};
}

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    grid.reserve(101);
    for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
    return grid;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileMissingError("cannot read config " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw FileFormatError("malformed config " + path.string() + ": " + e.what());
    }

    const fs::path base = path.parent_path();
    PipelineConfig config;
    try {
        config.output_dir = resolve_against(base, doc.at("output_dir").get<std::string>());
        config.threshold = doc.value("threshold", 0.5);
        config.use_micro = doc.value("use_micro", true);
        config.jobs = doc.value("jobs", 1);

        if (doc.contains("dataset")) {
            const auto& ds = doc["dataset"];
            if (ds.contains("manifest")) {
                config.dataset_manifest = resolve_against(base, ds["manifest"].get<std::string>());
            } else if (ds.contains("root")) {
                config.dataset_root = resolve_against(base, ds["root"].get<std::string>());
            }
            if (ds.contains("split_file")) {
                config.split_file = resolve_against(base, ds["split_file"].get<std::string>());
            }
        }

        if (doc.contains("micro")) {
            const auto& m = doc["micro"];
            config.micro.smoothing_sigma = m.value("smoothing_sigma", 0.0);
            config.micro.normalize_per_image = m.value("normalize_per_image", false);
        }

        if (doc.contains("macro")) {
            const auto& m = doc["macro"];
            const std::string source = m.value("source", "baseline");
            if (source == "external") {
                config.macro.kind = MacroKind::external_map;
                config.macro.external_dir = resolve_against(base, m.at("dir").get<std::string>());
            } else if (source == "baseline") {
                config.macro.kind = MacroKind::classical_baseline;
                config.macro.params.background_sigma = m.value("background_sigma", 20.0);
                config.macro.params.contrast_scale = m.value("contrast_scale", 60.0);
            } else {
                throw FileFormatError("unknown macro source '" + source + "'");
            }
        }

        if (doc.contains("synthesis")) {
            const auto& s = doc["synthesis"];
            config.synthesis.n_dil = s.value("n_dil", 0);
            config.synthesis.recall_lo = s.value("recall_lo", 0.925);
            config.synthesis.recall_hi = s.value("recall_hi", 0.975);
            config.synthesis.sigma = s.value("sigma", 12.0);
            config.synthesis.affine_factor = s.value("affine_factor", 0.2);
            config.synthesis.alpha_lo = s.value("alpha_lo", 10);
            config.synthesis.alpha_hi = s.value("alpha_hi", 10000);
            config.synthesis.seed = s.value("seed", std::uint64_t{0});
            config.synthesis.max_trials = s.value("max_trials", 64);
        }

        if (doc.contains("sweep")) {
            const auto& sw = doc["sweep"];
            std::vector<double> grid;
            if (sw.is_array()) {
                grid = sw.get<std::vector<double>>();
            } else {
                const double start = sw.value("start", 0.0);
                const double stop = sw.value("stop", 1.0);
                const double step = sw.value("step", 0.01);
                if (!(step > 0.0)) throw FileFormatError("sweep step must be positive");
                for (double t = start; t <= stop + 1e-12; t += step) {
                    grid.push_back(std::min(t, 1.0));
                }
            }
            config.sweep_grid = std::move(grid);
        }
    } catch (const json::exception& e) {
        throw FileFormatError("config " + path.string() + ": " + e.what());
    }
    return config;
}

DatasetManifest load_configured_manifest(const PipelineConfig& config) {
    if (!config.dataset_manifest.empty()) {
        return load_manifest_json(config.dataset_manifest, config.split_file);
    }
    if (!config.dataset_root.empty()) {
        return load_manifest(config.dataset_root, config.split_file);
    }
    throw ParameterError("config names no dataset (need dataset.root or dataset.manifest)");
}

EvalReport run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config) {
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
        throw ParameterError("threshold outside [0,1]");
    }
    const std::vector<ManifestEntry> test = manifest.test_entries();
    if (test.empty()) throw InputError("manifest has no test entries");

    const fs::path out = config.output_dir;
    fs::create_directories(out / "macro");
    fs::create_directories(out / "micro");
    fs::create_directories(out / "fused");
    fs::create_directories(out / "pred");

    std::vector<ImageScore> scores(test.size());
    std::vector<ProbMap> fused_maps(test.size(), ProbMap(1, 1));
    std::vector<BinaryMask> gts(test.size(), BinaryMask(1, 1));

    detail::parallel_for(test.size(), config.jobs, [&](std::size_t i) {
        const ManifestEntry& entry = test[i];
        with_image_context(entry.image_id, [&] {
            const GrayImage image = read_image_as_gray(entry.image_path);
            const BinaryMask gt = read_mask_png(entry.annotation_path);
            if (image.width() != gt.width() || image.height() != gt.height()) {
                throw StructuralError("image and annotation dimensions differ");
            }

            // Branch maps are snapped to the persisted 16-bit grid before
            // fusing, so a run reproduces the chained CLI stages (which pass
            // through PNG files) bit for bit.
            const ProbMap macro_map = quantize16(
                config.macro.kind == MacroKind::external_map
                    ? load_prob_map(config.macro.external_dir / (entry.image_id + ".png"),
                                    image.width(), image.height())
                    : classical_baseline(image, config.macro.params));
            const ProbMap micro_map = quantize16(
                config.use_micro
                    ? micro_prob(image, config.micro)
                    : ProbMap(image.width(), image.height(),
                              std::vector<float>(image.size(), 1.0f)));
            ProbMap fused = quantize16(fuse(macro_map, micro_map));
            const BinaryMask pred = threshold(fused, config.threshold);

            const std::string name = entry.image_id + ".png";
            write_prob_png(out / "macro" / name, macro_map);
            write_prob_png(out / "micro" / name, micro_map);
            write_prob_png(out / "fused" / name, fused);
            write_mask_png(out / "pred" / name, pred);

            ImageScore score = score_image(pred, gt);
            score.image_id = entry.image_id;
            scores[i] = std::move(score);
            fused_maps[i] = std::move(fused);
            gts[i] = std::move(gt);
        });
    });

    EvalReport report;
    report.scores = std::move(scores);
    report.threshold = config.threshold;
    report.macro_f1 = macro_f1(report.scores);
    report.micro_f1 = micro_f1(report.scores);
    if (config.sweep_grid) {
        report.sweep = sweep_threshold(fused_maps, gts, *config.sweep_grid);
    }
    write_report_json(out / "report.json", report);
    return report;
}

std::vector<SynthesisLogLine> synth_dataset(const DatasetManifest& manifest,
                                            const SynthesisConfig& config,
                                            const fs::path& out_dir, int jobs) {
    config.validate();
    const std::vector<ManifestEntry> train = manifest.train_entries();
    if (train.empty()) throw InputError("manifest has no train entries");
    fs::create_directories(out_dir);

    std::vector<SynthesisLogLine> log(train.size());
    detail::parallel_for(train.size(), jobs, [&](std::size_t i) {
        const ManifestEntry& entry = train[i];
        with_image_context(entry.image_id, [&] {
            const BinaryMask precise = read_mask_png(entry.annotation_path);
            SynthesisConfig per_image = config;
            per_image.seed = image_seed(config.seed, entry.image_id);
            SynthesisResult result = synthesize(precise, per_image);

            const std::string name = entry.image_id + ".png";
            write_mask_png(out_dir / name, result.mask);
            log[i] = SynthesisLogLine{name, result.record};
        });
    });

    std::ofstream jsonl(out_dir / "synthesis_log.jsonl");
    if (!jsonl) throw FileMissingError("cannot write synthesis log under " + out_dir.string());
    for (const auto& line : log) {
        json obj{{"file", line.file},
                 {"alpha_used", line.record.alpha_used},
                 {"achieved_recall", line.record.achieved_recall},
                 {"trials", line.record.trials}};
        jsonl << obj.dump() << "\n";
    }
    return log;
}

EvalReport evaluate_dirs(const fs::path& pred_dir, const fs::path& gt_dir, double t,
                         const std::optional<std::vector<double>>& sweep_grid) {
    const std::vector<fs::path> gt_files = list_pngs(gt_dir);
    if (gt_files.empty()) throw InputError("no annotation masks under " + gt_dir.string());

    std::vector<ImageScore> scores;
    std::vector<ProbMap> probs;
    std::vector<BinaryMask> gts;
    for (const auto& gt_path : gt_files) {
        const std::string id = gt_path.stem().string();
        const fs::path pred_path = pred_dir / (id + ".png");
        if (!fs::is_regular_file(pred_path)) {
            throw FileMissingError("no prediction for '" + id + "' (expected " +
                                   pred_path.string() + ")");
        }
        with_image_context(id, [&] {
            const BinaryMask gt = read_mask_png(gt_path);
            const ProbMap prob = load_prob_map(pred_path, gt.width(), gt.height());
            ImageScore score = score_image(threshold(prob, t), gt);
            score.image_id = id;
            scores.push_back(std::move(score));
            probs.push_back(prob);
            gts.push_back(gt);
        });
    }

    EvalReport report;
    report.scores = std::move(scores);
    report.threshold = t;
    report.macro_f1 = macro_f1(report.scores);
    report.micro_f1 = micro_f1(report.scores);
    if (sweep_grid) {
        report.sweep = sweep_threshold(probs, gts, *sweep_grid);
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    json scores = json::array();
    for (const auto& s : report.scores) {
        scores.push_back({{"image_id", s.image_id},
                          {"precision", s.precision},
                          {"recall", s.recall},
                          {"tp", s.tp},
                          {"fp", s.fp},
                          {"fn", s.fn}});
    }
    json doc{{"threshold", report.threshold},
             {"macro_f1", report.macro_f1},
             {"micro_f1", report.micro_f1},
             {"scores", std::move(scores)}};
    if (report.sweep) {
        json curve = json::array();
        for (const auto& point : report.sweep->curve) {
            curve.push_back({{"threshold", point.threshold}, {"macro_f1", point.macro_f1}});
        }
        doc["sweep"] = {{"curve", std::move(curve)},
                        {"best_threshold", report.sweep->best().threshold},
                        {"best_macro_f1", report.sweep->best().macro_f1}};
    }
    return doc.dump(2) + "\n";
}

void write_report_json(const fs::path& path, const EvalReport& report) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FileMissingError("cannot write report " + path.string());
    out << report_to_json(report);
}

void write_sweep_csv(const fs::path& path, const SweepResult& sweep) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FileMissingError("cannot write sweep curve " + path.string());
    out << "threshold,macro_f1\n";
    for (const auto& point : sweep.curve) {
        out << point.threshold << "," << point.macro_f1 << "\n";
    }
}

}  // namespace crackweak
