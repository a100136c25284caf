#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pastegen/compose.hpp"

namespace pastegen {

struct DatasetReport {
    uint64_t seed_base = 0;
    int workers = 1;
    long scene_count = 0;
    long plan_count = 0;
    long image_count = 0;
    long placements_planned = 0;
    long placements_kept = 0;
    long placements_dropped = 0;
    std::vector<long> instances_per_category; // index = category_id
    double wall_seconds = 0.0;

    nlohmann::json to_json(const std::vector<std::string>& category_names) const;
};

// Executes every plan: one `img_<plan_id>.png` + `img_<plan_id>.txt` pair in
// output_dir, plus classes.txt and train.txt. Plans are independent work
// items fanned out over `workers` threads; all randomness is already fixed by
// the plan ids, so output bytes are identical for any worker count. The first
// I/O failure aborts the run with the failing plan_id.
DatasetReport generate(const std::vector<PlacementPlan>& plans,
                       const std::vector<BackgroundScene>& scenes, const SpriteLibrary& library,
                       const std::string& output_dir, int workers, double min_visibility,
                       uint64_t seed_base, ScaleFilter filter = ScaleFilter::nearest);

std::string image_filename(uint64_t plan_id);
std::string label_filename(uint64_t plan_id);

} // namespace pastegen
