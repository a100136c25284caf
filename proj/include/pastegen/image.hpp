#pragma once

#include <cstdint>
#include <vector>

namespace pastegen {

// Interleaved 8-bit raster, row-major. channels is 3 (RGB) or 4 (RGBA).
// Alpha convention across the project: byte 0..255, a pixel is opaque when
// alpha > 0 (the renderer and keyer emit binary 0/255 unless supersampling
// or a non-nearest filter is asked for).
struct ImageU8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<uint8_t> pixels;

    static ImageU8 make(int w, int h, int c, uint8_t fill = 0);

    bool empty() const { return width <= 0 || height <= 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    uint8_t* row(int y) { return pixels.data() + static_cast<size_t>(y) * width * channels; }
    const uint8_t* row(int y) const {
        return pixels.data() + static_cast<size_t>(y) * width * channels;
    }
};

// Pixel-space axis-aligned box; w/h in pixels, (x, y) is the top-left pixel.
struct IntRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const IntRect&) const = default;
};

// Minimal rectangle containing every pixel with alpha > 0. Returns false when
// the image is fully transparent.
bool tight_alpha_bbox(const ImageU8& rgba, IntRect* out);

// Channel conversions used at module boundaries (scenes are RGB, sprites and
// compositing buffers are RGBA).
ImageU8 rgb_to_rgba(const ImageU8& rgb);
ImageU8 rgba_to_rgb(const ImageU8& rgba);

} // namespace pastegen
