#include "pastegen/sprite.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pastegen/error.hpp"
#include "pastegen/image_io.hpp"
#include "pastegen/kernels/blend_kernel.hpp"

namespace fs = std::filesystem;

namespace pastegen {

const char* to_string(Variant v) { return v == Variant::upright ? "upright" : "flipped"; }

Variant variant_from_string(const std::string& s) {
    if (s == "upright") return Variant::upright;
    if (s == "flipped") return Variant::flipped;
    fail("bad-variant", "unknown variant `" + s + "`");
}

void SpriteView::validate() const {
    if (raster.channels != 4 || raster.empty())
        fail("bad-sprite", "sprite raster must be non-empty RGBA");
    IntRect recomputed;
    if (!tight_alpha_bbox(raster, &recomputed))
        fail("empty-sprite", "sprite has no opaque pixels");
    if (!(recomputed == tight_bbox))
        fail("bad-sprite", "stored tight_bbox does not match alpha support");
}

ImageU8 key_background(const ImageU8& rgb, std::array<uint8_t, 3> key, double tolerance) {
    if (rgb.empty()) fail("empty-image", "cannot key an empty image");
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance))
        fail("bad-tolerance", "tolerance must be finite and >= 0");

    ImageU8 out = rgb_to_rgba(rgb);
    const int tol = static_cast<int>(std::floor(std::min(tolerance, 255.0)));
    kernels::key_mask(out.pixels.data(), out.width * out.height, key[0], key[1], key[2], tol);

    IntRect support;
    if (!tight_alpha_bbox(out, &support))
        fail("empty-sprite", "keying removed every pixel");
    return out;
}

void despeckle(ImageU8* rgba, int min_component_px) {
    if (min_component_px <= 1) return;
    const int w = rgba->width, h = rgba->height;
    std::vector<int> label(static_cast<size_t>(w) * h, -1);
    std::vector<int> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (rgba->at(x, y, 3) == 0 || label[idx] >= 0) continue;
            // Flood-fill one 4-connected component.
            std::vector<size_t> members;
            stack.clear();
            stack.push_back(static_cast<int>(idx));
            label[idx] = 1;
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                members.push_back(static_cast<size_t>(cur));
                const int cx = cur % w, cy = cur / w;
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                    const size_t nidx = static_cast<size_t>(ny[k]) * w + nx[k];
                    if (rgba->at(nx[k], ny[k], 3) == 0 || label[nidx] >= 0) continue;
                    label[nidx] = 1;
                    stack.push_back(static_cast<int>(nidx));
                }
            }
            if (static_cast<int>(members.size()) < min_component_px)
                for (size_t m : members) rgba->pixels[m * 4 + 3] = 0;
        }
    }
}

size_t SpriteLibrary::total_sprites() const {
    size_t n = 0;
    for (const auto& group : sprites) n += group.size();
    return n;
}

const SpriteView* SpriteLibrary::find(int category_id, Variant variant, int view_index) const {
    if (category_id < 0 || category_id >= category_count()) return nullptr;
    for (const SpriteView& s : sprites[category_id])
        if (s.variant == variant && s.view_index == view_index) return &s;
    return nullptr;
}

void SpriteLibrary::validate() const {
    if (categories.size() != sprites.size())
        fail("bad-library", "category/sprite group count mismatch");
    std::set<std::string> seen;
    for (size_t c = 0; c < categories.size(); ++c) {
        if (categories[c].empty()) fail("bad-library", "empty category name");
        if (!seen.insert(categories[c]).second)
            fail("duplicate-category", "category `" + categories[c] + "` listed twice");
        if (sprites[c].empty())
            fail("bad-library", "category `" + categories[c] + "` has no sprites");
        for (const SpriteView& s : sprites[c]) s.validate();
    }
}

namespace {

bool is_blank(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

} // namespace

SpriteLibrary load_library(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) fail("file-open", "cannot open manifest " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    SpriteLibrary lib;
    std::set<std::tuple<int, int, int>> keys;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line) || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        const std::string where = manifest_path + ":" + std::to_string(line_no);
        if (tag == "category") {
            std::string name;
            if (!(ss >> name)) fail("manifest-parse", where + ": expected `category <name>`");
            lib.categories.push_back(name);
            lib.sprites.emplace_back();
        } else if (tag == "sprite") {
            std::string variant_str, rel;
            int view_index = -1;
            if (!(ss >> variant_str >> view_index >> rel) || view_index < 0)
                fail("manifest-parse",
                     where + ": expected `sprite <variant> <view_index> <path>`");
            if (lib.categories.empty())
                fail("manifest-parse", where + ": sprite line before any category");

            SpriteView sprite;
            sprite.category_id = static_cast<int>(lib.categories.size()) - 1;
            sprite.variant = variant_from_string(variant_str);
            sprite.view_index = view_index;
            if (!keys.insert({sprite.category_id, static_cast<int>(sprite.variant), view_index})
                     .second)
                fail("duplicate-view", where + ": duplicate (category, variant, view_index)");

            const fs::path file = base / rel;
            if (!fs::exists(file)) fail("missing-file", where + ": no such sprite " + file.string());
            sprite.raster = read_png(file.string(), 4);
            if (!tight_alpha_bbox(sprite.raster, &sprite.tight_bbox))
                fail("empty-sprite", where + ": sprite " + rel + " has all-zero alpha");
            lib.sprites.back().push_back(std::move(sprite));
        } else {
            fail("manifest-parse", where + ": unrecognized line `" + line + "`");
        }
    }
    lib.validate();
    return lib;
}

} // namespace pastegen
