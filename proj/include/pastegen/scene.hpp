#pragma once

#include <string>
#include <vector>

#include "pastegen/image.hpp"

namespace pastegen {

// One predeclared paste location. The sprite's center lands on (x, y); the
// footprint caps bound the scaled sprite, and scale_range bounds the random
// scale multiplier drawn at planning time.
struct AnchorPoint {
    int x = 0;
    int y = 0;
    int max_width = 1;
    int max_height = 1;
    double scale_min = 1.0;
    double scale_max = 1.0;

    void validate() const;
};

struct BackgroundScene {
    std::string scene_id;
    ImageU8 raster; // RGB
    std::vector<AnchorPoint> anchors;

    void validate() const; // anchors non-empty and inside the image
};

// Anchors file: `anchor x y max_w max_h scale_min scale_max` lines, `#`
// comments and blank lines allowed.
std::vector<AnchorPoint> parse_anchors(std::istream& in, const std::string& origin);
std::vector<AnchorPoint> load_anchors(const std::string& path);
void save_anchors(const std::vector<AnchorPoint>& anchors, const std::string& path);

BackgroundScene load_scene(const std::string& png_path, const std::string& anchors_path,
                           const std::string& scene_id);

// Loads every `<id>.png` + `<id>.anchors` pair in a directory, ordered by id.
std::vector<BackgroundScene> load_scene_dir(const std::string& dir);

// Writes `<id>.png` + `<id>.anchors` into dir.
void save_scene(const BackgroundScene& scene, const std::string& dir);

} // namespace pastegen
