#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "pastegen/image.hpp"
#include "pastegen/mesh.hpp"
#include "pastegen/rng.hpp"
#include "pastegen/scene.hpp"
#include "pastegen/sprite.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Self-cleaning scratch directory under the system temp root.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("pastegen_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
};

inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// Order-independent directory fingerprint: FNV over sorted (relative path,
// file bytes) pairs.
inline uint64_t digest_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    uint64_t h = 1469598103934665603ull;
    for (const fs::path& f : files) {
        const std::string rel = fs::relative(f, dir).string();
        h = fnv1a(rel.data(), rel.size(), h);
        std::ifstream in(f, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        h = fnv1a(bytes.data(), bytes.size(), h);
    }
    return h;
}

// Axis-aligned unit square facing the camera (x-z plane), two triangles.
inline pastegen::TriangleMesh make_quad_mesh(pastegen::Vec3 color = {0.5, 0.5, 0.5}) {
    pastegen::TriangleMesh m;
    m.vertices = {{-0.5, 0.0, -0.5}, {0.5, 0.0, -0.5}, {0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}};
    m.vertex_colors.assign(4, color);
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

// Unit cube centered at the origin, 12 triangles.
inline pastegen::TriangleMesh make_cube_mesh(pastegen::Vec3 color = {0.8, 0.2, 0.2}) {
    pastegen::TriangleMesh m;
    for (int i = 0; i < 8; ++i)
        m.vertices.push_back({(i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5});
    m.vertex_colors.assign(8, color);
    const int quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                             {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& q : quads) {
        m.faces.push_back({static_cast<uint32_t>(q[0]), static_cast<uint32_t>(q[1]),
                           static_cast<uint32_t>(q[2])});
        m.faces.push_back({static_cast<uint32_t>(q[0]), static_cast<uint32_t>(q[2]),
                           static_cast<uint32_t>(q[3])});
    }
    return m;
}

inline pastegen::ImageU8 make_noise_rgb(int w, int h, uint64_t seed) {
    pastegen::Rng rng(seed);
    pastegen::ImageU8 img = pastegen::ImageU8::make(w, h, 3);
    for (uint8_t& b : img.pixels) b = static_cast<uint8_t>(rng.next_below(256));
    return img;
}

// Fully opaque square sprite of one color.
inline pastegen::SpriteView make_solid_sprite(int category, int view_index, int w, int h,
                                              uint8_t r, uint8_t g, uint8_t b,
                                              pastegen::Variant variant = pastegen::Variant::upright) {
    pastegen::SpriteView s;
    s.category_id = category;
    s.variant = variant;
    s.view_index = view_index;
    s.raster = pastegen::ImageU8::make(w, h, 4);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            s.raster.at(x, y, 0) = r;
            s.raster.at(x, y, 1) = g;
            s.raster.at(x, y, 2) = b;
            s.raster.at(x, y, 3) = 255;
        }
    s.tight_bbox = {0, 0, w, h};
    return s;
}

// Ring-free blob sprite with an irregular alpha mask (deterministic).
inline pastegen::SpriteView make_blob_sprite(int category, int view_index, int w, int h,
                                             uint64_t seed,
                                             pastegen::Variant variant = pastegen::Variant::upright) {
    pastegen::Rng rng(seed);
    pastegen::SpriteView s;
    s.category_id = category;
    s.variant = variant;
    s.view_index = view_index;
    s.raster = pastegen::ImageU8::make(w, h, 4);
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    const double rx = w / 2.0, ry = h / 2.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = (x - cx) / rx, dy = (y - cy) / ry;
            const bool inside = dx * dx + dy * dy <= 1.0;
            s.raster.at(x, y, 0) = static_cast<uint8_t>(rng.next_below(256));
            s.raster.at(x, y, 1) = static_cast<uint8_t>(rng.next_below(256));
            s.raster.at(x, y, 2) = static_cast<uint8_t>(rng.next_below(256));
            s.raster.at(x, y, 3) = inside ? 255 : 0;
        }
    // Make sure the extreme rows/cols carry support so the bbox is the full
    // raster (keeps constructed sprites valid without recomputation).
    s.raster.at(0, h / 2, 3) = 255;
    s.raster.at(w - 1, h / 2, 3) = 255;
    s.raster.at(w / 2, 0, 3) = 255;
    s.raster.at(w / 2, h - 1, 3) = 255;
    s.tight_bbox = {0, 0, w, h};
    return s;
}

inline pastegen::SpriteLibrary make_library(int categories, int sprites_per_category,
                                            uint64_t seed, int sprite_px = 12) {
    pastegen::SpriteLibrary lib;
    for (int c = 0; c < categories; ++c) {
        lib.categories.push_back("cat" + std::to_string(c));
        lib.sprites.emplace_back();
        for (int v = 0; v < sprites_per_category; ++v)
            lib.sprites.back().push_back(
                make_blob_sprite(c, v, sprite_px, sprite_px, seed + c * 100 + v));
    }
    return lib;
}

inline pastegen::BackgroundScene make_scene(const std::string& id, int w, int h, uint64_t seed,
                                            int anchor_grid = 3, int cap = 16) {
    pastegen::BackgroundScene scene;
    scene.scene_id = id;
    scene.raster = make_noise_rgb(w, h, seed);
    for (int gy = 0; gy < anchor_grid; ++gy)
        for (int gx = 0; gx < anchor_grid; ++gx) {
            pastegen::AnchorPoint a;
            a.x = (gx + 1) * w / (anchor_grid + 1);
            a.y = (gy + 1) * h / (anchor_grid + 1);
            a.max_width = cap;
            a.max_height = cap;
            a.scale_min = 0.5;
            a.scale_max = 1.5;
            scene.anchors.push_back(a);
        }
    return scene;
}

} // namespace testutil
