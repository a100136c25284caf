#include "pastegen/generate.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "pastegen/error.hpp"
#include "pastegen/image_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pastegen {

std::string image_filename(uint64_t plan_id) { return "img_" + std::to_string(plan_id) + ".png"; }
std::string label_filename(uint64_t plan_id) { return "img_" + std::to_string(plan_id) + ".txt"; }

json DatasetReport::to_json(const std::vector<std::string>& category_names) const {
    json per_category = json::object();
    for (size_t c = 0; c < instances_per_category.size(); ++c) {
        const std::string name =
            c < category_names.size() ? category_names[c] : std::to_string(c);
        per_category[name] = instances_per_category[c];
    }
    return json{{"seed_base", seed_base},
                {"workers", workers},
                {"scene_count", scene_count},
                {"plan_count", plan_count},
                {"image_count", image_count},
                {"placements_planned", placements_planned},
                {"placements_kept", placements_kept},
                {"placements_dropped", placements_dropped},
                {"instances_per_category", per_category},
                {"wall_seconds", wall_seconds}};
}

DatasetReport generate(const std::vector<PlacementPlan>& plans,
                       const std::vector<BackgroundScene>& scenes, const SpriteLibrary& library,
                       const std::string& output_dir, int workers, double min_visibility,
                       uint64_t seed_base, ScaleFilter filter) {
    if (workers < 1) fail("bad-gen-config", "workers must be >= 1");
    fs::create_directories(output_dir);

    std::unordered_map<std::string, const BackgroundScene*> scene_index;
    for (const BackgroundScene& s : scenes) scene_index[s.scene_id] = &s;
    for (const PlacementPlan& p : plans)
        if (!scene_index.count(p.scene_id))
            fail("bad-plan", "plan " + std::to_string(p.plan_id) + " references unknown scene " +
                                 p.scene_id);

    const auto t0 = std::chrono::steady_clock::now();

    std::atomic<size_t> next{0};
    std::atomic<bool> aborted{false};
    std::mutex merge_mutex;
    std::exception_ptr first_error;
    uint64_t failed_plan = 0;

    DatasetReport report;
    report.seed_base = seed_base;
    report.workers = workers;
    report.scene_count = static_cast<long>(scenes.size());
    report.plan_count = static_cast<long>(plans.size());
    report.instances_per_category.assign(library.category_count(), 0);

    auto worker_fn = [&]() {
        std::vector<long> local_instances(library.category_count(), 0);
        long local_images = 0, local_planned = 0, local_kept = 0;
        uint64_t current_plan = 0;
        try {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= plans.size() || aborted.load()) break;
                const PlacementPlan& plan = plans[i];
                current_plan = plan.plan_id;
                const BackgroundScene& scene = *scene_index.at(plan.scene_id);
                ComposedImage composed = compose(scene, plan, library, min_visibility, filter);
                write_png((fs::path(output_dir) / image_filename(plan.plan_id)).string(),
                          composed.raster);
                write_labels(composed.annotations,
                             (fs::path(output_dir) / label_filename(plan.plan_id)).string());
                ++local_images;
                local_planned += static_cast<long>(plan.placements.size());
                local_kept += static_cast<long>(composed.annotations.size());
                for (const AnnotationRecord& r : composed.annotations)
                    ++local_instances[r.category_id];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!first_error) {
                first_error = std::current_exception();
                failed_plan = current_plan;
            }
            aborted.store(true);
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        report.image_count += local_images;
        report.placements_planned += local_planned;
        report.placements_kept += local_kept;
        for (size_t c = 0; c < local_instances.size(); ++c)
            report.instances_per_category[c] += local_instances[c];
    };

    const int thread_count = static_cast<int>(
        std::min<size_t>(static_cast<size_t>(workers), std::max<size_t>(plans.size(), 1)));
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker_fn);
    for (std::thread& t : pool) t.join();

    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const Error& e) {
            fail(e.code(),
                 "generation aborted at plan " + std::to_string(failed_plan) + ": " + e.what());
        } catch (const std::exception& e) {
            fail("generate-failed",
                 "generation aborted at plan " + std::to_string(failed_plan) + ": " + e.what());
        }
    }

    report.placements_dropped = report.placements_planned - report.placements_kept;

    // Index files, written in plan order (not completion order). train.txt
    // entries are relative to the dataset directory so the tree relocates and
    // output bytes do not depend on where it was generated.
    write_classes(library.categories, (fs::path(output_dir) / "classes.txt").string());
    std::vector<std::string> image_paths;
    image_paths.reserve(plans.size());
    for (const PlacementPlan& p : plans) image_paths.push_back(image_filename(p.plan_id));
    write_train_list(image_paths, (fs::path(output_dir) / "train.txt").string());

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace pastegen
