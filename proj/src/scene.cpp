#include "pastegen/scene.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pastegen/error.hpp"
#include "pastegen/image_io.hpp"

namespace fs = std::filesystem;

namespace pastegen {

void AnchorPoint::validate() const {
    if (max_width < 1 || max_height < 1)
        fail("bad-anchor", "footprint caps must be >= 1 px");
    if (!(scale_min > 0.0 && scale_min <= scale_max))
        fail("bad-anchor", "need 0 < scale_min <= scale_max");
}

void BackgroundScene::validate() const {
    if (raster.channels != 3 || raster.empty())
        fail("bad-scene", scene_id + ": raster must be non-empty RGB");
    if (anchors.empty()) fail("bad-scene", scene_id + ": anchors must be non-empty");
    for (const AnchorPoint& a : anchors) {
        a.validate();
        if (!raster.in_bounds(a.x, a.y))
            fail("bad-scene", scene_id + ": anchor (" + std::to_string(a.x) + "," +
                                  std::to_string(a.y) + ") outside the image");
    }
}

namespace {
bool is_blank(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}
} // namespace

std::vector<AnchorPoint> parse_anchors(std::istream& in, const std::string& origin) {
    std::vector<AnchorPoint> anchors;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line) || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (tag != "anchor") fail("anchors-parse", where + ": unrecognized line `" + line + "`");
        AnchorPoint a;
        if (!(ss >> a.x >> a.y >> a.max_width >> a.max_height >> a.scale_min >> a.scale_max))
            fail("anchors-parse",
                 where + ": expected `anchor x y max_w max_h scale_min scale_max`");
        a.validate();
        anchors.push_back(a);
    }
    return anchors;
}

std::vector<AnchorPoint> load_anchors(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file-open", "cannot open anchors file " + path);
    return parse_anchors(in, path);
}

void save_anchors(const std::vector<AnchorPoint>& anchors, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("file-open", "cannot write anchors file " + path);
    // Scale bounds use shortest round-trip formatting: plans drawn against
    // in-memory anchors must stay valid against the reloaded file.
    auto shortest = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    for (const AnchorPoint& a : anchors) {
        out << "anchor " << a.x << " " << a.y << " " << a.max_width << " " << a.max_height << " "
            << shortest(a.scale_min) << " " << shortest(a.scale_max) << "\n";
    }
    if (!out) fail("file-write", "failed writing " + path);
}

BackgroundScene load_scene(const std::string& png_path, const std::string& anchors_path,
                           const std::string& scene_id) {
    BackgroundScene scene;
    scene.scene_id = scene_id;
    scene.raster = read_png(png_path, 3);
    scene.anchors = load_anchors(anchors_path);
    scene.validate();
    return scene;
}

std::vector<BackgroundScene> load_scene_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) fail("file-open", dir + " is not a directory");
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
        ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    std::vector<BackgroundScene> scenes;
    for (const std::string& id : ids) {
        const fs::path png = fs::path(dir) / (id + ".png");
        const fs::path anchors = fs::path(dir) / (id + ".anchors");
        if (!fs::exists(anchors))
            fail("missing-file", "scene " + id + " has no anchors file " + anchors.string());
        scenes.push_back(load_scene(png.string(), anchors.string(), id));
    }
    if (scenes.empty()) fail("bad-scene", "no scenes found in " + dir);
    return scenes;
}

void save_scene(const BackgroundScene& scene, const std::string& dir) {
    fs::create_directories(dir);
    write_png((fs::path(dir) / (scene.scene_id + ".png")).string(), scene.raster);
    save_anchors(scene.anchors, (fs::path(dir) / (scene.scene_id + ".anchors")).string());
}

} // namespace pastegen
