#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pastegen/labels.hpp"
#include "pastegen/scene.hpp"
#include "pastegen/sprite.hpp"

namespace pastegen {

struct Placement {
    int anchor_index = 0;
    int category_id = 0;
    Variant variant = Variant::upright;
    int view_index = 0;
    double scale = 1.0;
};

// Deterministic recipe for one output image. plan_id doubles as the RNG seed
// that produced the placements, so a plan is reproducible from its id alone.
struct PlacementPlan {
    uint64_t plan_id = 0;
    std::string scene_id;
    std::vector<Placement> placements;
};

struct GenConfig {
    int images_per_scene = 1;
    int objects_min = 1;
    int objects_max = 1;
    double min_visibility = 0.25; // fraction of the sprite's support that must stay in-image
    uint64_t seed_base = 0;

    void validate() const;
};

// Exactly images_per_scene plans per scene, plan_id = seed_base +
// global_plan_index (scene-major). Per plan the object count, the distinct
// anchors, and each placement's (category, sprite, scale) are drawn from the
// stream seeded by plan_id.
std::vector<PlacementPlan> plan_dataset(const SpriteLibrary& library,
                                        const std::vector<BackgroundScene>& scenes,
                                        const GenConfig& config);

struct ComposedImage {
    ImageU8 raster; // RGB
    std::vector<AnnotationRecord> annotations;
    std::vector<IntRect> pixel_boxes; // pre-normalization boxes, parallel to annotations
};

// Nearest-neighbor is the default: it preserves binary alpha exactly, so the
// bbox-by-construction contract needs no thresholding. Bilinear produces
// fractional alpha; support (for visibility and boxes) is then alpha >= 128.
enum class ScaleFilter { nearest, bilinear };

// Pastes sprites center-on-anchor in placement order (later over earlier).
// Each annotation's box is the tight box of that sprite's own scaled alpha
// support clipped to the image; occlusion by later placements is not
// subtracted. Placements with visible support fraction < min_visibility are
// dropped from both image and annotations.
ComposedImage compose(const BackgroundScene& scene, const PlacementPlan& plan,
                      const SpriteLibrary& library, double min_visibility,
                      ScaleFilter filter = ScaleFilter::nearest);

// Pieces compose() is built from, exposed so tests can re-derive boxes from
// the scaled alpha support independently of the annotation path.
std::pair<int, int> scaled_placement_size(const IntRect& tight_bbox, double scale,
                                          const AnchorPoint& anchor);
ImageU8 scale_sprite_nearest(const ImageU8& rgba, const IntRect& src_bbox, int out_w, int out_h);
ImageU8 scale_sprite_bilinear(const ImageU8& rgba, const IntRect& src_bbox, int out_w, int out_h);

// Support threshold for a given filter: alpha > 0 for nearest, >= 128 for
// bilinear.
inline bool alpha_is_support(uint8_t alpha, ScaleFilter filter) {
    return filter == ScaleFilter::nearest ? alpha > 0 : alpha >= 128;
}

// Plan persistence for the plan/generate CLI split (JSON).
void write_plans(const std::vector<PlacementPlan>& plans, const std::string& path);
std::vector<PlacementPlan> read_plans(const std::string& path);

} // namespace pastegen
