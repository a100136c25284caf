#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "util.hpp"

#include "pastegen/error.hpp"
#include "pastegen/image_io.hpp"
#include "pastegen/sprite.hpp"

using namespace pastegen;
using testutil::TempDir;

TEST_CASE("key_background: nothing survives keying a flat image") {
    ImageU8 img = ImageU8::make(8, 8, 3, 200);
    CHECK_THROWS_WITH_AS(key_background(img, {200, 200, 200}, 0.0),
                         doctest::Contains("empty-sprite"), Error);
}

TEST_CASE("key_background: centered black square on white") {
    ImageU8 img = ImageU8::make(32, 32, 3, 255);
    for (int y = 11; y < 21; ++y)
        for (int x = 11; x < 21; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0;

    const ImageU8 keyed = key_background(img, {255, 255, 255}, 0.0);
    IntRect bbox;
    REQUIRE(tight_alpha_bbox(keyed, &bbox));
    CHECK(bbox == IntRect{11, 11, 10, 10});

    long opaque = 0;
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            if (keyed.at(x, y, 3) > 0) {
                ++opaque;
                // RGB preserved
                CHECK(keyed.at(x, y, 0) == 0);
            }
    CHECK(opaque == 100);
}

TEST_CASE("key_background: strict threshold keeps a one-level difference") {
    ImageU8 img = ImageU8::make(4, 1, 3, 100);
    img.at(2, 0, 1) = 101; // one level off in one channel
    const ImageU8 keyed = key_background(img, {100, 100, 100}, 0.0);
    CHECK(keyed.at(2, 0, 3) == 255);
    CHECK(keyed.at(0, 0, 3) == 0);
    CHECK(keyed.at(1, 0, 3) == 0);
}

TEST_CASE("key_background is idempotent on the opaque region") {
    const ImageU8 img = testutil::make_noise_rgb(24, 24, 5);
    const ImageU8 once = key_background(img, {90, 120, 60}, 40.0);
    // Re-key the RGB content: the opaque set cannot change (alpha is a pure
    // function of RGB which keying preserves).
    const ImageU8 rgb_again = rgba_to_rgb(once);
    const ImageU8 twice = key_background(rgb_again, {90, 120, 60}, 40.0);
    CHECK(once.pixels == twice.pixels);
}

TEST_CASE("despeckle removes small components only") {
    ImageU8 img = ImageU8::make(16, 16, 4, 0);
    // 3x3 blob
    for (int y = 2; y < 5; ++y)
        for (int x = 2; x < 5; ++x) img.at(x, y, 3) = 255;
    // lone pixel
    img.at(12, 12, 3) = 255;

    despeckle(&img, 4);
    CHECK(img.at(3, 3, 3) == 255);
    CHECK(img.at(12, 12, 3) == 0);
}

namespace {

void write_sprite_png(const std::string& path, int w, int h, bool any_alpha) {
    ImageU8 img = ImageU8::make(w, h, 4, 0);
    if (any_alpha)
        for (int y = 1; y < h - 1; ++y)
            for (int x = 1; x < w - 1; ++x) {
                img.at(x, y, 0) = 180;
                img.at(x, y, 3) = 255;
            }
    write_png(path, img);
}

} // namespace

TEST_CASE("load_library: manifest happy path and failure modes") {
    TempDir tmp("manifest");
    write_sprite_png(tmp.file("a0.png"), 8, 8, true);
    write_sprite_png(tmp.file("a1.png"), 8, 8, true);
    write_sprite_png(tmp.file("b0.png"), 10, 6, true);

    SUBCASE("two categories x three sprites, ids in manifest order") {
        write_sprite_png(tmp.file("a2.png"), 8, 8, true);
        write_sprite_png(tmp.file("b1.png"), 10, 6, true);
        write_sprite_png(tmp.file("b2.png"), 10, 6, true);
        std::ofstream(tmp.file("lib.manifest"))
            << "category alpha\n"
               "sprite upright 0 a0.png\n"
               "sprite flipped 1 a1.png\n"
               "sprite upright 2 a2.png\n"
               "# a comment\n"
               "category beta\n"
               "sprite upright 0 b0.png\n"
               "sprite upright 1 b1.png\n"
               "sprite flipped 2 b2.png\n";
        const SpriteLibrary lib = load_library(tmp.file("lib.manifest"));
        REQUIRE(lib.category_count() == 2);
        CHECK(lib.categories[0] == "alpha");
        CHECK(lib.categories[1] == "beta");
        CHECK(lib.total_sprites() == 6);
        REQUIRE(lib.find(0, Variant::flipped, 1) != nullptr);
        CHECK(lib.find(0, Variant::flipped, 1)->tight_bbox == IntRect{1, 1, 6, 6});
        CHECK(lib.find(1, Variant::upright, 3) == nullptr);
    }

    SUBCASE("duplicate view key") {
        std::ofstream(tmp.file("dup.manifest"))
            << "category alpha\n"
               "sprite upright 0 a0.png\n"
               "sprite upright 0 a1.png\n";
        CHECK_THROWS_WITH_AS(load_library(tmp.file("dup.manifest")),
                             doctest::Contains("duplicate-view"), Error);
    }

    SUBCASE("fully transparent sprite") {
        write_sprite_png(tmp.file("zero.png"), 8, 8, false);
        std::ofstream(tmp.file("zero.manifest")) << "category alpha\nsprite upright 0 zero.png\n";
        CHECK_THROWS_WITH_AS(load_library(tmp.file("zero.manifest")),
                             doctest::Contains("empty-sprite"), Error);
    }

    SUBCASE("missing sprite file") {
        std::ofstream(tmp.file("miss.manifest")) << "category alpha\nsprite upright 0 nope.png\n";
        CHECK_THROWS_WITH_AS(load_library(tmp.file("miss.manifest")),
                             doctest::Contains("missing-file"), Error);
    }

    SUBCASE("sprite before category") {
        std::ofstream(tmp.file("orphan.manifest")) << "sprite upright 0 a0.png\n";
        CHECK_THROWS_WITH_AS(load_library(tmp.file("orphan.manifest")),
                             doctest::Contains("manifest-parse"), Error);
    }
}

TEST_CASE("png round trip preserves bytes") {
    TempDir tmp("png");
    ImageU8 img = ImageU8::make(13, 9, 4);
    Rng rng(3);
    for (uint8_t& b : img.pixels) b = static_cast<uint8_t>(rng.next_below(256));
    write_png(tmp.file("x.png"), img);
    const ImageU8 back = read_png(tmp.file("x.png"), 4);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);

    int w = 0, h = 0;
    read_png_size(tmp.file("x.png"), &w, &h);
    CHECK(w == 13);
    CHECK(h == 9);
}
