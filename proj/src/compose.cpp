#include "pastegen/compose.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pastegen/error.hpp"
#include "pastegen/kernels/blend_kernel.hpp"
#include "pastegen/rng.hpp"

using nlohmann::json;

namespace pastegen {

void GenConfig::validate() const {
    if (images_per_scene < 1) fail("bad-gen-config", "images_per_scene must be >= 1");
    if (objects_min < 1 || objects_min > objects_max)
        fail("bad-gen-config", "need 1 <= objects_min <= objects_max");
    if (!(min_visibility > 0.0 && min_visibility <= 1.0))
        fail("bad-gen-config", "min_visibility must be in (0, 1]");
}

std::vector<PlacementPlan> plan_dataset(const SpriteLibrary& library,
                                        const std::vector<BackgroundScene>& scenes,
                                        const GenConfig& config) {
    config.validate();
    library.validate();
    if (scenes.empty()) fail("bad-scene", "no scenes to plan over");
    for (const BackgroundScene& s : scenes) {
        s.validate();
        if (config.objects_max > static_cast<int>(s.anchors.size()))
            fail("too-many-objects", "scene " + s.scene_id + " has " +
                                         std::to_string(s.anchors.size()) +
                                         " anchors but objects_max is " +
                                         std::to_string(config.objects_max));
    }

    std::vector<PlacementPlan> plans;
    plans.reserve(scenes.size() * static_cast<size_t>(config.images_per_scene));
    uint64_t global_index = 0;
    std::vector<int> anchor_order;
    for (const BackgroundScene& scene : scenes) {
        for (int k = 0; k < config.images_per_scene; ++k, ++global_index) {
            PlacementPlan plan;
            plan.plan_id = config.seed_base + global_index;
            plan.scene_id = scene.scene_id;
            Rng rng(plan.plan_id);

            const int count = rng.next_int(config.objects_min, config.objects_max);

            // Distinct anchors via partial Fisher-Yates.
            const int anchor_count = static_cast<int>(scene.anchors.size());
            anchor_order.resize(anchor_count);
            std::iota(anchor_order.begin(), anchor_order.end(), 0);
            for (int i = 0; i < count; ++i) {
                const int j =
                    i + static_cast<int>(rng.next_below(static_cast<uint64_t>(anchor_count - i)));
                std::swap(anchor_order[i], anchor_order[j]);
            }

            plan.placements.reserve(count);
            for (int i = 0; i < count; ++i) {
                Placement p;
                p.anchor_index = anchor_order[i];
                p.category_id =
                    static_cast<int>(rng.next_below(static_cast<uint64_t>(library.category_count())));
                const auto& group = library.sprites[p.category_id];
                const SpriteView& sprite =
                    group[rng.next_below(static_cast<uint64_t>(group.size()))];
                p.variant = sprite.variant;
                p.view_index = sprite.view_index;
                const AnchorPoint& anchor = scene.anchors[p.anchor_index];
                p.scale = rng.next_in(anchor.scale_min, anchor.scale_max);
                plan.placements.push_back(p);
            }
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

std::pair<int, int> scaled_placement_size(const IntRect& tight_bbox, double scale,
                                          const AnchorPoint& anchor) {
    const double des_w = scale * tight_bbox.w;
    const double des_h = scale * tight_bbox.h;
    double cap = 1.0;
    cap = std::min(cap, anchor.max_width / des_w);
    cap = std::min(cap, anchor.max_height / des_h);
    const int w = std::max(1, static_cast<int>(std::lround(des_w * cap)));
    const int h = std::max(1, static_cast<int>(std::lround(des_h * cap)));
    return {w, h};
}

ImageU8 scale_sprite_nearest(const ImageU8& rgba, const IntRect& src_bbox, int out_w, int out_h) {
    ImageU8 out = ImageU8::make(out_w, out_h, 4);
    for (int y = 0; y < out_h; ++y) {
        // Integer center mapping: src = floor((dst + 0.5) * src_dim / out_dim)
        int sy = static_cast<int>((2 * y + 1) * static_cast<long>(src_bbox.h) / (2 * out_h));
        if (sy >= src_bbox.h) sy = src_bbox.h - 1;
        for (int x = 0; x < out_w; ++x) {
            int sx = static_cast<int>((2 * x + 1) * static_cast<long>(src_bbox.w) / (2 * out_w));
            if (sx >= src_bbox.w) sx = src_bbox.w - 1;
            for (int c = 0; c < 4; ++c)
                out.at(x, y, c) = rgba.at(src_bbox.x + sx, src_bbox.y + sy, c);
        }
    }
    return out;
}

ImageU8 scale_sprite_bilinear(const ImageU8& rgba, const IntRect& src_bbox, int out_w, int out_h) {
    ImageU8 out = ImageU8::make(out_w, out_h, 4);
    auto sample = [&](int sx, int sy, int c) -> double {
        sx = std::clamp(sx, 0, src_bbox.w - 1);
        sy = std::clamp(sy, 0, src_bbox.h - 1);
        return static_cast<double>(rgba.at(src_bbox.x + sx, src_bbox.y + sy, c));
    };
    for (int y = 0; y < out_h; ++y) {
        const double fy = (y + 0.5) * src_bbox.h / out_h - 0.5;
        const int iy = static_cast<int>(std::floor(fy));
        const double wy = fy - iy;
        for (int x = 0; x < out_w; ++x) {
            const double fx = (x + 0.5) * src_bbox.w / out_w - 0.5;
            const int ix = static_cast<int>(std::floor(fx));
            const double wx = fx - ix;
            const double w00 = (1 - wx) * (1 - wy), w10 = wx * (1 - wy);
            const double w01 = (1 - wx) * wy, w11 = wx * wy;

            const double a00 = sample(ix, iy, 3), a10 = sample(ix + 1, iy, 3);
            const double a01 = sample(ix, iy + 1, 3), a11 = sample(ix + 1, iy + 1, 3);
            const double alpha = w00 * a00 + w10 * a10 + w01 * a01 + w11 * a11;
            out.at(x, y, 3) = static_cast<uint8_t>(std::lround(std::clamp(alpha, 0.0, 255.0)));
            if (alpha <= 0.0) continue;
            // Alpha-weighted color so transparent texels do not bleed black.
            for (int c = 0; c < 3; ++c) {
                const double premult = w00 * a00 * sample(ix, iy, c) +
                                       w10 * a10 * sample(ix + 1, iy, c) +
                                       w01 * a01 * sample(ix, iy + 1, c) +
                                       w11 * a11 * sample(ix + 1, iy + 1, c);
                out.at(x, y, c) = static_cast<uint8_t>(
                    std::lround(std::clamp(premult / alpha, 0.0, 255.0)));
            }
        }
    }
    return out;
}

ComposedImage compose(const BackgroundScene& scene, const PlacementPlan& plan,
                      const SpriteLibrary& library, double min_visibility, ScaleFilter filter) {
    scene.validate();
    if (!(min_visibility > 0.0 && min_visibility <= 1.0))
        fail("bad-gen-config", "min_visibility must be in (0, 1]");

    ImageU8 canvas = rgb_to_rgba(scene.raster);
    const int W = canvas.width, H = canvas.height;

    ComposedImage result;
    for (const Placement& p : plan.placements) {
        if (p.anchor_index < 0 || p.anchor_index >= static_cast<int>(scene.anchors.size()))
            fail("bad-plan", "plan " + std::to_string(plan.plan_id) + ": anchor_index " +
                                 std::to_string(p.anchor_index) + " out of range");
        const AnchorPoint& anchor = scene.anchors[p.anchor_index];
        if (!(p.scale >= anchor.scale_min && p.scale <= anchor.scale_max))
            fail("bad-plan", "plan " + std::to_string(plan.plan_id) +
                                 ": scale outside the anchor's range");
        const SpriteView* sprite = library.find(p.category_id, p.variant, p.view_index);
        if (!sprite)
            fail("bad-plan", "plan " + std::to_string(plan.plan_id) + ": no sprite for category " +
                                 std::to_string(p.category_id) + " " + to_string(p.variant) +
                                 " view " + std::to_string(p.view_index));

        const auto [w, h] = scaled_placement_size(sprite->tight_bbox, p.scale, anchor);
        const ImageU8 scaled = filter == ScaleFilter::nearest
                                   ? scale_sprite_nearest(sprite->raster, sprite->tight_bbox, w, h)
                                   : scale_sprite_bilinear(sprite->raster, sprite->tight_bbox, w, h);
        const int x0 = anchor.x - w / 2;
        const int y0 = anchor.y - h / 2;

        // Visibility and the annotation box come from the scaled support.
        long total = 0, visible = 0;
        int min_x = W, min_y = H, max_x = -1, max_y = -1;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!alpha_is_support(scaled.at(x, y, 3), filter)) continue;
                ++total;
                const int ix = x0 + x, iy = y0 + y;
                if (ix < 0 || ix >= W || iy < 0 || iy >= H) continue;
                ++visible;
                if (ix < min_x) min_x = ix;
                if (ix > max_x) max_x = ix;
                if (iy < min_y) min_y = iy;
                if (iy > max_y) max_y = iy;
            }
        }
        if (total == 0 || static_cast<double>(visible) / static_cast<double>(total) < min_visibility)
            continue; // dropped from both image and annotations

        const int src_y_begin = std::max(0, -y0);
        const int src_y_end = std::min(h, H - y0);
        const int src_x_begin = std::max(0, -x0);
        const int src_x_end = std::min(w, W - x0);
        for (int sy = src_y_begin; sy < src_y_end; ++sy) {
            uint8_t* dst_row = canvas.row(y0 + sy) + static_cast<size_t>(x0 + src_x_begin) * 4;
            const uint8_t* src_row = scaled.row(sy) + static_cast<size_t>(src_x_begin) * 4;
            kernels::blend_over(dst_row, src_row, src_x_end - src_x_begin);
        }

        const IntRect box{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
        result.pixel_boxes.push_back(box);
        result.annotations.push_back(to_normalized(p.category_id, box, W, H));
    }

    result.raster = rgba_to_rgb(canvas);
    return result;
}

void write_plans(const std::vector<PlacementPlan>& plans, const std::string& path) {
    json root = json::array();
    for (const PlacementPlan& plan : plans) {
        json placements = json::array();
        for (const Placement& p : plan.placements)
            placements.push_back({{"anchor", p.anchor_index},
                                  {"category", p.category_id},
                                  {"variant", to_string(p.variant)},
                                  {"view", p.view_index},
                                  {"scale", p.scale}});
        root.push_back({{"plan_id", plan.plan_id},
                        {"scene_id", plan.scene_id},
                        {"placements", std::move(placements)}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("file-open", "cannot write plans file " + path);
    out << root.dump(2) << "\n";
    if (!out) fail("file-write", "failed writing " + path);
}

std::vector<PlacementPlan> read_plans(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-open", "cannot open plans file " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        fail("plans-parse", path + ": " + e.what());
    }
    std::vector<PlacementPlan> plans;
    try {
        for (const json& jp : root) {
            PlacementPlan plan;
            plan.plan_id = jp.at("plan_id").get<uint64_t>();
            plan.scene_id = jp.at("scene_id").get<std::string>();
            for (const json& pp : jp.at("placements")) {
                Placement p;
                p.anchor_index = pp.at("anchor").get<int>();
                p.category_id = pp.at("category").get<int>();
                p.variant = variant_from_string(pp.at("variant").get<std::string>());
                p.view_index = pp.at("view").get<int>();
                p.scale = pp.at("scale").get<double>();
                plan.placements.push_back(p);
            }
            plans.push_back(std::move(plan));
        }
    } catch (const json::exception& e) {
        fail("plans-parse", path + ": " + e.what());
    }
    return plans;
}

} // namespace pastegen
