#pragma once

#include <string>

#include "pastegen/image.hpp"

namespace pastegen {

// PNG I/O via libpng's simplified API. Writes are byte-deterministic for a
// given raster (fixed encoder settings, no timestamp chunks).

// Reads a PNG forcing the given channel count (3 = RGB, 4 = RGBA). Gray and
// palette images are expanded; 16-bit is reduced; an alpha channel is added
// (opaque) or dropped as needed.
ImageU8 read_png(const std::string& path, int channels);

void write_png(const std::string& path, const ImageU8& img);

// Header-only probe, used by the evaluator to denormalize label files.
void read_png_size(const std::string& path, int* width, int* height);

} // namespace pastegen
