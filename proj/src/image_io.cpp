#include "pastegen/image_io.hpp"

#include <png.h>

#include <cstring>

#include "pastegen/error.hpp"

namespace pastegen {

ImageU8 read_png(const std::string& path, int channels) {
    if (channels != 3 && channels != 4) fail("bad-image-shape", "read_png wants 3 or 4 channels");

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;

    if (!png_image_begin_read_from_file(&png, path.c_str()))
        fail("png-read", path + ": " + png.message);

    png.format = channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;

    ImageU8 img;
    img.width = static_cast<int>(png.width);
    img.height = static_cast<int>(png.height);
    img.channels = channels;
    img.pixels.resize(PNG_IMAGE_SIZE(png));

    if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
        png_image_free(&png);
        fail("png-read", path + ": " + png.message);
    }
    return img;
}

void write_png(const std::string& path, const ImageU8& img) {
    if (img.empty() || (img.channels != 3 && img.channels != 4))
        fail("bad-image-shape", "write_png wants a non-empty RGB or RGBA raster");

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = img.channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;

    if (!png_image_write_to_file(&png, path.c_str(), 0, img.pixels.data(), 0, nullptr))
        fail("png-write", path + ": " + png.message);
}

void read_png_size(const std::string& path, int* width, int* height) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str()))
        fail("png-read", path + ": " + png.message);
    *width = static_cast<int>(png.width);
    *height = static_cast<int>(png.height);
    png_image_free(&png);
}

} // namespace pastegen
