// pastegen: synthesize annotated object-detection datasets by pasting
// rendered object sprites onto anchored backgrounds, plus open-set scoring
// over embeddings and detection evaluation. See README.md for the formats.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pastegen/ace.hpp"
#include "pastegen/compose.hpp"
#include "pastegen/error.hpp"
#include "pastegen/eval.hpp"
#include "pastegen/generate.hpp"
#include "pastegen/image_io.hpp"
#include "pastegen/labels.hpp"
#include "pastegen/mesh.hpp"
#include "pastegen/openset.hpp"
#include "pastegen/render.hpp"
#include "pastegen/sprite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pastegen;

namespace {

// Config problems are usage errors (exit 2), module failures are runtime
// errors (exit 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeshEntry {
    std::string category;
    std::string upright;
    std::string flipped; // optional
};

struct PipelineConfig {
    fs::path base; // directory of the config file; relative paths resolve here

    std::string sprite_manifest;
    std::vector<MeshEntry> meshes;
    std::string scenes_dir;
    std::string output_dir = "out";

    int azimuth_count = 24;
    std::vector<double> elevations{15.0, 35.0, 55.0};
    ViewSpec view_template;

    AceParams ace_params;
    int ace_variants = 1;

    GenConfig gen;
    ScaleFilter scale_filter = ScaleFilter::nearest;
    double shrinkage = 0.1;
    double quantile = 0.99;
    uint64_t seed_base = 0;
    int workers = 1;
    bool output_is_override = false; // --out paths are cwd-relative

    std::string resolve(const std::string& p) const {
        if (p.empty() || fs::path(p).is_absolute()) return p;
        return (base / p).string();
    }

    std::string output_root() const {
        return output_is_override ? output_dir : resolve(output_dir);
    }
};

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }

    PipelineConfig cfg;
    cfg.base = fs::path(path).parent_path();
    try {
        cfg.sprite_manifest = j.value("sprite_manifest", std::string());
        if (j.contains("meshes")) {
            for (const json& jm : j.at("meshes")) {
                MeshEntry m;
                m.category = jm.at("category").get<std::string>();
                m.upright = jm.at("upright").get<std::string>();
                m.flipped = jm.value("flipped", std::string());
                cfg.meshes.push_back(std::move(m));
            }
        }
        cfg.scenes_dir = j.value("scenes_dir", std::string());
        cfg.output_dir = j.value("output_dir", std::string("out"));

        if (j.contains("view")) {
            const json& v = j.at("view");
            cfg.azimuth_count = v.value("azimuth_count", cfg.azimuth_count);
            if (v.contains("elevations"))
                cfg.elevations = v.at("elevations").get<std::vector<double>>();
            cfg.view_template.width = v.value("width", cfg.view_template.width);
            cfg.view_template.height = v.value("height", cfg.view_template.height);
            cfg.view_template.fit_margin = v.value("fit_margin", cfg.view_template.fit_margin);
            cfg.view_template.supersample = v.value("supersample", false);
        }
        if (j.contains("ace")) {
            const json& a = j.at("ace");
            cfg.ace_params.slope = a.value("slope", cfg.ace_params.slope);
            if (a.contains("sample_count")) {
                const json& sc = a.at("sample_count");
                if (sc.is_string()) {
                    if (sc.get<std::string>() != "full")
                        throw UsageError("ace.sample_count must be a number or \"full\"");
                    cfg.ace_params.sample_count = AceParams::kFullSampling;
                } else {
                    cfg.ace_params.sample_count = sc.get<int>();
                }
            }
            cfg.ace_variants = a.value("variants_per_background", cfg.ace_variants);
        }
        if (j.contains("gen")) {
            const json& g = j.at("gen");
            cfg.gen.images_per_scene = g.value("images_per_scene", cfg.gen.images_per_scene);
            cfg.gen.objects_min = g.value("objects_min", cfg.gen.objects_min);
            cfg.gen.objects_max = g.value("objects_max", cfg.gen.objects_max);
            cfg.gen.min_visibility = g.value("min_visibility", cfg.gen.min_visibility);
            const std::string filter = g.value("scale_filter", std::string("nearest"));
            if (filter == "bilinear")
                cfg.scale_filter = ScaleFilter::bilinear;
            else if (filter != "nearest")
                throw UsageError("gen.scale_filter must be \"nearest\" or \"bilinear\"");
        }
        if (j.contains("openset")) {
            const json& o = j.at("openset");
            cfg.shrinkage = o.value("shrinkage", cfg.shrinkage);
            cfg.quantile = o.value("quantile", cfg.quantile);
        }
        cfg.seed_base = j.value("seed_base", cfg.seed_base);
        cfg.workers = j.value("workers", cfg.workers);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config error: ") + e.what());
    }
    if (cfg.workers < 1) throw UsageError("workers must be >= 1");
    cfg.gen.seed_base = cfg.seed_base;
    cfg.ace_params.seed = cfg.seed_base;
    return cfg;
}

std::string sprite_filename(const std::string& category, const GridSprite& g) {
    return category + "_" + to_string(g.variant == 0 ? Variant::upright : Variant::flipped) + "_" +
           std::to_string(g.elevation_index) + "_" + std::to_string(g.azimuth_index) + ".png";
}

// Renders every configured mesh pair into out_dir and writes sprites.manifest
// there; returns the manifest path.
std::string render_sprites(const PipelineConfig& cfg, const std::string& out_dir) {
    if (cfg.meshes.empty()) throw UsageError("config has no meshes to render");
    fs::create_directories(out_dir);
    std::ostringstream manifest;
    long total = 0;
    for (const MeshEntry& entry : cfg.meshes) {
        const TriangleMesh upright = load_mesh(cfg.resolve(entry.upright));
        std::optional<TriangleMesh> flipped;
        if (!entry.flipped.empty()) flipped = load_mesh(cfg.resolve(entry.flipped));

        const auto grid = render_view_grid(upright, flipped ? &*flipped : nullptr,
                                           cfg.azimuth_count, cfg.elevations, cfg.view_template);
        manifest << "category " << entry.category << "\n";
        for (const GridSprite& g : grid) {
            const std::string name = sprite_filename(entry.category, g);
            write_png((fs::path(out_dir) / name).string(), g.render.rgba);
            const int view_index = g.elevation_index * cfg.azimuth_count + g.azimuth_index;
            manifest << "sprite "
                     << to_string(g.variant == 0 ? Variant::upright : Variant::flipped) << " "
                     << view_index << " " << name << "\n";
            ++total;
        }
    }
    const std::string manifest_path = (fs::path(out_dir) / "sprites.manifest").string();
    std::ofstream out(manifest_path, std::ios::binary);
    out << manifest.str();
    if (!out) fail("file-write", "failed writing " + manifest_path);
    std::cout << "rendered " << total << " sprites into " << out_dir << "\n";
    return manifest_path;
}

SpriteLibrary load_sprites(const PipelineConfig& cfg) {
    if (cfg.sprite_manifest.empty())
        throw UsageError("config needs sprite_manifest (or run full-run with meshes)");
    return load_library(cfg.resolve(cfg.sprite_manifest));
}

std::array<uint8_t, 3> parse_key_color(const std::string& s) {
    int r, g, b;
    if (std::sscanf(s.c_str(), "%d,%d,%d", &r, &g, &b) != 3 || r < 0 || r > 255 || g < 0 ||
        g > 255 || b < 0 || b > 255)
        throw UsageError("--key wants `R,G,B` with 0..255 components");
    return {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b)};
}

int parse_category_token(const std::string& tok) {
    if (tok == "unknown") return kUnknownCategory;
    try {
        return std::stoi(tok);
    } catch (...) {
        throw UsageError("bad category token `" + tok + "` (id or `unknown`)");
    }
}

void print_report(const DatasetReport& report, const SpriteLibrary& library) {
    std::cout << report.to_json(library.categories).dump(2) << "\n";
    std::cout << "seed_base " << report.seed_base << ": " << report.image_count << " images, "
              << report.placements_kept << " instances (" << report.placements_dropped
              << " dropped) in " << report.wall_seconds << " s with " << report.workers
              << " worker(s)\n";
}

// Ground truth for eval: YOLO labels next to each image in the list.
std::vector<GroundTruthBox> load_ground_truth(const std::vector<std::string>& images,
                                              const fs::path& base,
                                              std::set<std::string>* known_images) {
    std::vector<GroundTruthBox> gt;
    for (const std::string& img : images) {
        fs::path img_path(img);
        if (img_path.is_relative()) img_path = base / img_path;
        const std::string stem = img_path.stem().string();
        known_images->insert(stem);
        int w = 0, h = 0;
        read_png_size(img_path.string(), &w, &h);
        fs::path label_path = img_path;
        label_path.replace_extension(".txt");
        if (!fs::exists(label_path)) continue; // image with no objects
        for (const AnnotationRecord& r : read_labels(label_path.string())) {
            GroundTruthBox g;
            g.image_id = stem;
            g.category_id = r.category_id;
            g.box = Box{(r.cx - r.w / 2) * w, (r.cy - r.h / 2) * h, r.w * w, r.h * h};
            gt.push_back(std::move(g));
        }
    }
    return gt;
}

struct CommonFlags {
    std::string config_path;
    std::string out_override;
    std::string scenes_override;
    int workers_override = 0;
    long long seed_override = -1;
    int images_per_scene_override = 0;
    bool dry_run = false;
};

PipelineConfig config_with_overrides(const CommonFlags& flags) {
    if (flags.config_path.empty()) throw UsageError("--config is required");
    PipelineConfig cfg = load_config(flags.config_path);
    if (!flags.out_override.empty()) {
        cfg.output_dir = flags.out_override;
        cfg.output_is_override = true;
    }
    if (!flags.scenes_override.empty()) cfg.scenes_dir = flags.scenes_override;
    if (flags.workers_override > 0) cfg.workers = flags.workers_override;
    if (flags.seed_override >= 0) {
        cfg.seed_base = static_cast<uint64_t>(flags.seed_override);
        cfg.gen.seed_base = cfg.seed_base;
        cfg.ace_params.seed = cfg.seed_base;
    }
    if (flags.images_per_scene_override > 0)
        cfg.gen.images_per_scene = flags.images_per_scene_override;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"paste-based training-set generator with auto-annotation"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto add_common = [&](CLI::App* cmd, bool with_dry_run = false) {
        cmd->add_option("--config", flags.config_path, "pipeline config (JSON)");
        cmd->add_option("--out", flags.out_override, "override output directory");
        cmd->add_option("--scenes", flags.scenes_override, "override scenes directory");
        cmd->add_option("--workers", flags.workers_override, "override worker count");
        cmd->add_option("--seed-base", flags.seed_override, "override seed_base");
        cmd->add_option("--images-per-scene", flags.images_per_scene_override,
                        "override images_per_scene");
        if (with_dry_run) cmd->add_flag("--dry-run", flags.dry_run, "print counts, write nothing");
    };

    CLI::App* cmd_render = app.add_subcommand("render-views", "render mesh view grids to sprites");
    add_common(cmd_render);

    CLI::App* cmd_key = app.add_subcommand("key", "chroma-key one image to an RGBA sprite");
    std::string key_input, key_output, key_color = "255,255,255";
    double key_tolerance = 0.0;
    int key_despeckle = 0;
    cmd_key->add_option("--input", key_input, "input PNG")->required();
    cmd_key->add_option("--output", key_output, "output RGBA PNG")->required();
    cmd_key->add_option("--key", key_color, "key color R,G,B (default white)");
    cmd_key->add_option("--tolerance", key_tolerance, "max-channel distance threshold");
    cmd_key->add_option("--despeckle", key_despeckle,
                        "drop opaque components smaller than N px (default off)");

    CLI::App* cmd_ace = app.add_subcommand("ace-backgrounds", "ACE-recolor background scenes");
    add_common(cmd_ace);

    CLI::App* cmd_plan = app.add_subcommand("plan", "plan placements for every output image");
    add_common(cmd_plan, true);

    CLI::App* cmd_generate = app.add_subcommand("generate", "execute plans into images + labels");
    add_common(cmd_generate, true);
    std::string plans_path;
    cmd_generate->add_option("--plans", plans_path, "plans JSON from `plan`");

    CLI::App* cmd_fit = app.add_subcommand("fit-openset", "fit per-category Gaussians");
    std::string fit_features, fit_model_out;
    double fit_shrinkage = 0.1;
    cmd_fit->add_option("--features", fit_features, "labeled features file")->required();
    cmd_fit->add_option("--model-out", fit_model_out, "model JSON output")->required();
    cmd_fit->add_option("--shrinkage", fit_shrinkage, "covariance shrinkage in [0,1]");

    CLI::App* cmd_calibrate = app.add_subcommand("calibrate", "per-category distance thresholds");
    std::string cal_model, cal_features, cal_out;
    double cal_quantile = 0.99;
    cmd_calibrate->add_option("--model", cal_model, "model JSON")->required();
    cmd_calibrate->add_option("--features", cal_features, "held-out features file")->required();
    cmd_calibrate->add_option("--thresholds-out", cal_out, "thresholds JSON output")->required();
    cmd_calibrate->add_option("--quantile", cal_quantile, "calibration quantile in (0,1)");

    CLI::App* cmd_score = app.add_subcommand("score", "override predictions with `unknown`");
    std::string score_model, score_thresholds, score_input, score_output;
    cmd_score->add_option("--model", score_model, "model JSON")->required();
    cmd_score->add_option("--thresholds", score_thresholds, "thresholds JSON")->required();
    cmd_score->add_option("--input", score_input, "predicted-label features file")->required();
    cmd_score->add_option("--output", score_output, "decisions output (one label per line)")
        ->required();

    CLI::App* cmd_eval = app.add_subcommand("eval", "detection mAP / open-set rates");
    std::string eval_detections, eval_truth, eval_json_out, eval_openset_file;
    double eval_iou = 0.5;
    cmd_eval->add_option("--detections", eval_detections, "detections file");
    cmd_eval->add_option("--truth", eval_truth, "train.txt listing ground-truth images");
    cmd_eval->add_option("--iou-threshold", eval_iou, "match threshold (default 0.5)");
    cmd_eval->add_option("--json", eval_json_out, "also write results as JSON");
    cmd_eval->add_option("--openset", eval_openset_file,
                         "`<true> <decided>` pairs: open-set rates instead of mAP");

    CLI::App* cmd_full = app.add_subcommand("full-run", "render -> ace -> plan -> generate");
    add_common(cmd_full);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_render->parsed()) {
            const PipelineConfig cfg = config_with_overrides(flags);
            render_sprites(cfg, (fs::path(cfg.output_root()) / "sprites").string());
        } else if (cmd_key->parsed()) {
            const ImageU8 input = read_png(key_input, 3);
            ImageU8 keyed = key_background(input, parse_key_color(key_color), key_tolerance);
            if (key_despeckle > 1) {
                despeckle(&keyed, key_despeckle);
                IntRect support;
                if (!tight_alpha_bbox(keyed, &support))
                    fail("empty-sprite", "despeckle removed every component");
            }
            write_png(key_output, keyed);
            std::cout << "keyed " << key_input << " -> " << key_output << "\n";
        } else if (cmd_ace->parsed()) {
            const PipelineConfig cfg = config_with_overrides(flags);
            if (cfg.scenes_dir.empty()) throw UsageError("config needs scenes_dir");
            const auto scenes = load_scene_dir(cfg.resolve(cfg.scenes_dir));
            const auto equalized = equalize_backgrounds(scenes, cfg.ace_variants, cfg.ace_params);
            const std::string out_dir =
                (fs::path(cfg.output_root()) / "scenes_ace").string();
            for (const BackgroundScene& s : equalized) save_scene(s, out_dir);
            std::cout << "seed_base " << cfg.seed_base << ": wrote " << equalized.size()
                      << " scenes (" << scenes.size() << " originals x " << (1 + cfg.ace_variants)
                      << ") into " << out_dir << "\n";
        } else if (cmd_plan->parsed()) {
            const PipelineConfig cfg = config_with_overrides(flags);
            if (cfg.scenes_dir.empty()) throw UsageError("config needs scenes_dir");
            const SpriteLibrary library = load_sprites(cfg);
            const auto scenes = load_scene_dir(cfg.resolve(cfg.scenes_dir));
            const auto plans = plan_dataset(library, scenes, cfg.gen);
            std::cout << "seed_base " << cfg.seed_base << ": " << plans.size() << " plans ("
                      << scenes.size() << " scenes x " << cfg.gen.images_per_scene << ")\n";
            if (!flags.dry_run) {
                const std::string out =
                    (fs::path(cfg.output_root()) / "plans.json").string();
                fs::create_directories(fs::path(out).parent_path());
                write_plans(plans, out);
                std::cout << "wrote " << out << "\n";
            }
        } else if (cmd_generate->parsed()) {
            const PipelineConfig cfg = config_with_overrides(flags);
            if (cfg.scenes_dir.empty()) throw UsageError("config needs scenes_dir");
            const SpriteLibrary library = load_sprites(cfg);
            const auto scenes = load_scene_dir(cfg.resolve(cfg.scenes_dir));
            std::vector<PlacementPlan> plans;
            if (plans_path.empty())
                plans_path = (fs::path(cfg.output_root()) / "plans.json").string();
            if (fs::exists(plans_path)) {
                plans = read_plans(plans_path);
            } else {
                plans = plan_dataset(library, scenes, cfg.gen);
            }
            if (flags.dry_run) {
                std::cout << "seed_base " << cfg.seed_base << ": would generate " << plans.size()
                          << " images + " << plans.size() << " label files\n";
            } else {
                const std::string out_dir =
                    (fs::path(cfg.output_root()) / "dataset").string();
                const DatasetReport report =
                    generate(plans, scenes, library, out_dir, cfg.workers,
                             cfg.gen.min_visibility, cfg.seed_base, cfg.scale_filter);
                print_report(report, library);
            }
        } else if (cmd_fit->parsed()) {
            int dim = 0;
            const auto features = read_features(fit_features, &dim);
            const GaussianCategoryModel model = fit(features, fit_shrinkage);
            save_model(model, fit_model_out);
            std::cout << "fit " << model.categories.size() << " categories at dim " << dim
                      << " (shrinkage " << fit_shrinkage << ") -> " << fit_model_out << "\n";
        } else if (cmd_calibrate->parsed()) {
            const GaussianCategoryModel model = load_model(cal_model);
            int dim = 0;
            const auto held_out = read_features(cal_features, &dim);
            const ThresholdTable table = calibrate(model, held_out, cal_quantile);
            save_thresholds(table, cal_out);
            std::cout << "calibrated " << table.tau.size() << " thresholds at q=" << cal_quantile
                      << " -> " << cal_out << "\n";
        } else if (cmd_score->parsed()) {
            const GaussianCategoryModel model = load_model(score_model);
            const ThresholdTable table = load_thresholds(score_thresholds);
            int dim = 0;
            const auto predictions = read_features(score_input, &dim);
            if (dim != model.dim)
                fail("dimension-mismatch", "input dim " + std::to_string(dim) + " vs model dim " +
                                               std::to_string(model.dim));
            std::ofstream out(score_output, std::ios::binary);
            if (!out) fail("file-open", "cannot write " + score_output);
            long kept = 0, rejected = 0;
            for (const auto& [predicted, samples] : predictions) {
                for (const FeatureVector& x : samples) {
                    const int decided = decide(model, table, predicted, x);
                    if (decided == kUnknownCategory) {
                        out << "unknown\n";
                        ++rejected;
                    } else {
                        out << decided << "\n";
                        ++kept;
                    }
                }
            }
            if (!out) fail("file-write", "failed writing " + score_output);
            std::cout << "kept " << kept << ", rejected " << rejected << " -> " << score_output
                      << "\n";
        } else if (cmd_eval->parsed()) {
            if (!eval_openset_file.empty()) {
                std::ifstream in(eval_openset_file);
                if (!in) fail("file-open", "cannot open " + eval_openset_file);
                std::vector<OpensetDecisionPair> pairs;
                std::string true_tok, decided_tok;
                while (in >> true_tok >> decided_tok)
                    pairs.push_back(
                        {parse_category_token(true_tok), parse_category_token(decided_tok)});
                const OpensetRates rates = evaluate_openset(pairs);
                std::cout << "known_accept_rate " << rates.known_accept_rate
                          << "\nunknown_detection_rate " << rates.unknown_detection_rate << "\n";
            } else {
                if (eval_detections.empty() || eval_truth.empty())
                    throw UsageError("eval needs --detections and --truth (or --openset)");
                const auto detections = read_detections(eval_detections);
                const auto images = read_train_list(eval_truth);
                std::set<std::string> known;
                const auto gt =
                    load_ground_truth(images, fs::path(eval_truth).parent_path(), &known);
                const EvalResult result = evaluate(detections, gt, known, eval_iou);
                std::cout << result.to_table();
                if (!eval_json_out.empty()) {
                    std::ofstream jo(eval_json_out, std::ios::binary);
                    jo << result.to_json().dump(2) << "\n";
                    if (!jo) fail("file-write", "failed writing " + eval_json_out);
                }
            }
        } else if (cmd_full->parsed()) {
            const PipelineConfig cfg = config_with_overrides(flags);
            if (cfg.scenes_dir.empty()) throw UsageError("config needs scenes_dir");
            const std::string out_root = cfg.output_root();

            // 1. sprites: render mesh grids when configured, else use the manifest.
            SpriteLibrary library;
            if (!cfg.meshes.empty()) {
                const std::string manifest =
                    render_sprites(cfg, (fs::path(out_root) / "sprites").string());
                library = load_library(manifest);
            } else {
                library = load_sprites(cfg);
            }

            // 2. backgrounds + ACE lighting variants.
            auto scenes = load_scene_dir(cfg.resolve(cfg.scenes_dir));
            scenes = equalize_backgrounds(scenes, cfg.ace_variants, cfg.ace_params);
            const std::string scenes_out = (fs::path(out_root) / "scenes_ace").string();
            for (const BackgroundScene& s : scenes) save_scene(s, scenes_out);

            // 3. plan, 4. generate.
            const auto plans = plan_dataset(library, scenes, cfg.gen);
            write_plans(plans, (fs::path(out_root) / "plans.json").string());
            const DatasetReport report =
                generate(plans, scenes, library, (fs::path(out_root) / "dataset").string(),
                         cfg.workers, cfg.gen.min_visibility, cfg.seed_base, cfg.scale_filter);
            print_report(report, library);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
