#include "pastegen/image.hpp"

#include "pastegen/error.hpp"

namespace pastegen {

ImageU8 ImageU8::make(int w, int h, int c, uint8_t fill) {
    if (w <= 0 || h <= 0 || (c != 1 && c != 3 && c != 4))
        fail("bad-image-shape", "cannot allocate " + std::to_string(w) + "x" +
                                    std::to_string(h) + "x" + std::to_string(c));
    ImageU8 img;
    img.width = w;
    img.height = h;
    img.channels = c;
    img.pixels.assign(static_cast<size_t>(w) * h * c, fill);
    return img;
}

bool tight_alpha_bbox(const ImageU8& rgba, IntRect* out) {
    if (rgba.channels != 4) fail("bad-image-shape", "tight_alpha_bbox needs RGBA input");
    int min_x = rgba.width, min_y = rgba.height, max_x = -1, max_y = -1;
    for (int y = 0; y < rgba.height; ++y) {
        const uint8_t* row = rgba.row(y);
        for (int x = 0; x < rgba.width; ++x) {
            if (row[x * 4 + 3] == 0) continue;
            if (x < min_x) min_x = x;
            if (x > max_x) max_x = x;
            if (y < min_y) min_y = y;
            if (y > max_y) max_y = y;
        }
    }
    if (max_x < 0) return false;
    *out = IntRect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    return true;
}

ImageU8 rgb_to_rgba(const ImageU8& rgb) {
    if (rgb.channels == 4) return rgb;
    if (rgb.channels != 3) fail("bad-image-shape", "expected RGB input");
    ImageU8 out = ImageU8::make(rgb.width, rgb.height, 4);
    const size_t n = static_cast<size_t>(rgb.width) * rgb.height;
    for (size_t i = 0; i < n; ++i) {
        out.pixels[i * 4 + 0] = rgb.pixels[i * 3 + 0];
        out.pixels[i * 4 + 1] = rgb.pixels[i * 3 + 1];
        out.pixels[i * 4 + 2] = rgb.pixels[i * 3 + 2];
        out.pixels[i * 4 + 3] = 255;
    }
    return out;
}

ImageU8 rgba_to_rgb(const ImageU8& rgba) {
    if (rgba.channels == 3) return rgba;
    if (rgba.channels != 4) fail("bad-image-shape", "expected RGBA input");
    ImageU8 out = ImageU8::make(rgba.width, rgba.height, 3);
    const size_t n = static_cast<size_t>(rgba.width) * rgba.height;
    for (size_t i = 0; i < n; ++i) {
        out.pixels[i * 3 + 0] = rgba.pixels[i * 4 + 0];
        out.pixels[i * 3 + 1] = rgba.pixels[i * 4 + 1];
        out.pixels[i * 3 + 2] = rgba.pixels[i * 4 + 2];
    }
    return out;
}

} // namespace pastegen
