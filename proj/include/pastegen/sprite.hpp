#pragma once

#include <array>
#include <string>
#include <vector>

#include "pastegen/image.hpp"

namespace pastegen {

enum class Variant { upright, flipped };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s); // throws on unknown token

// One object cutout for a (category, variant, viewpoint) triple. The raster
// is RGBA; at least one pixel is opaque and tight_bbox is exactly the support
// of alpha > 0.
struct SpriteView {
    int category_id = 0;
    Variant variant = Variant::upright;
    int view_index = 0;
    ImageU8 raster;
    IntRect tight_bbox;

    void validate() const;
};

// Chebyshev (max-channel) chroma keying: alpha = 0 where the max per-channel
// absolute difference from key is <= tolerance, 255 elsewhere; RGB preserved.
// Fails with "empty-sprite" if nothing survives.
ImageU8 key_background(const ImageU8& rgb, std::array<uint8_t, 3> key, double tolerance);

// Optional cleanup: drops 4-connected opaque components smaller than
// min_component_px. Off by default everywhere (keeps bbox semantics exact).
void despeckle(ImageU8* rgba, int min_component_px);

struct SpriteLibrary {
    std::vector<std::string> categories; // index = category_id
    std::vector<std::vector<SpriteView>> sprites; // grouped by category_id

    int category_count() const { return static_cast<int>(categories.size()); }
    size_t total_sprites() const;
    const SpriteView* find(int category_id, Variant variant, int view_index) const;
    void validate() const;
};

// Manifest grammar (line-oriented ASCII, `#` comments and blank lines
// allowed):
//   category <name>
//   sprite <variant> <view_index> <relative/path.png>
// Sprite lines attach to the most recent category; paths are resolved
// relative to the manifest file.
SpriteLibrary load_library(const std::string& manifest_path);

} // namespace pastegen
