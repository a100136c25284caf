#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "util.hpp"

#include "pastegen/error.hpp"
#include "pastegen/generate.hpp"

namespace fs = std::filesystem;
using namespace pastegen;
using testutil::digest_dir;
using testutil::make_library;
using testutil::make_scene;
using testutil::TempDir;

namespace {

struct Fixture {
    SpriteLibrary lib = make_library(3, 3, 21);
    std::vector<BackgroundScene> scenes;
    GenConfig cfg;

    Fixture() {
        for (int i = 0; i < 4; ++i)
            scenes.push_back(make_scene("sc" + std::to_string(i), 100, 80, 60 + i));
        cfg.images_per_scene = 10;
        cfg.objects_min = 1;
        cfg.objects_max = 3;
        cfg.seed_base = 4242;
    }
};

} // namespace

TEST_CASE("generate: counts and index files") {
    Fixture f;
    const auto plans = plan_dataset(f.lib, f.scenes, f.cfg);
    TempDir tmp("gen");
    const DatasetReport report =
        generate(plans, f.scenes, f.lib, tmp.str(), 2, f.cfg.min_visibility, f.cfg.seed_base);

    CHECK(report.image_count == 40);
    CHECK(report.plan_count == 40);
    CHECK(report.placements_kept + report.placements_dropped == report.placements_planned);

    long png = 0, txt = 0;
    for (const auto& e : fs::directory_iterator(tmp.str())) {
        if (e.path().extension() == ".png") ++png;
        if (e.path().extension() == ".txt" && e.path().filename() != "classes.txt" &&
            e.path().filename() != "train.txt")
            ++txt;
    }
    CHECK(png == 40);
    CHECK(txt == 40);

    const auto classes = read_classes(tmp.file("classes.txt"));
    REQUIRE(classes.size() == 3);
    CHECK(classes[0] == "cat0");
    const auto train = read_train_list(tmp.file("train.txt"));
    REQUIRE(train.size() == 40);
    CHECK(fs::exists(tmp.path / train[0])); // entries are dataset-relative

    // Instance-count conservation: report totals match the label files.
    std::vector<long> counted(3, 0);
    long total = 0;
    for (const PlacementPlan& p : plans) {
        for (const AnnotationRecord& r : read_labels(tmp.file(label_filename(p.plan_id))))
            ++counted[r.category_id], ++total;
    }
    CHECK(total == report.placements_kept);
    for (int c = 0; c < 3; ++c) CHECK(counted[c] == report.instances_per_category[c]);
}

TEST_CASE("generate: identical bytes for any worker count") {
    Fixture f;
    const auto plans = plan_dataset(f.lib, f.scenes, f.cfg);

    TempDir one("gen_w1"), six("gen_w6");
    generate(plans, f.scenes, f.lib, one.str(), 1, f.cfg.min_visibility, f.cfg.seed_base);
    generate(plans, f.scenes, f.lib, six.str(), 6, f.cfg.min_visibility, f.cfg.seed_base);
    CHECK(digest_dir(one.path) == digest_dir(six.path));

    // Shuffled execution order cannot change bytes either: reverse the plans.
    std::vector<PlacementPlan> reversed(plans.rbegin(), plans.rend());
    TempDir rev("gen_rev");
    generate(reversed, f.scenes, f.lib, rev.str(), 2, f.cfg.min_visibility, f.cfg.seed_base);
    // train.txt lists plans in execution order, so compare per-plan files.
    for (const PlacementPlan& p : plans) {
        std::ifstream a(one.file(image_filename(p.plan_id)), std::ios::binary);
        std::ifstream b(rev.file(image_filename(p.plan_id)), std::ios::binary);
        std::vector<char> ba((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        std::vector<char> bb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        REQUIRE(!ba.empty());
        REQUIRE(ba == bb);
    }
}

TEST_CASE("generate: failures carry the failing plan id") {
    Fixture f;
    auto plans = plan_dataset(f.lib, f.scenes, f.cfg);
    plans.resize(3);
    plans[1].placements[0].anchor_index = 999; // invalid at compose time

    TempDir tmp("gen_fail");
    try {
        generate(plans, f.scenes, f.lib, tmp.str(), 2, f.cfg.min_visibility, f.cfg.seed_base);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(std::to_string(plans[1].plan_id)) != std::string::npos);
    }

    PlacementPlan orphan;
    orphan.plan_id = 1;
    orphan.scene_id = "nope";
    CHECK_THROWS_WITH_AS(
        generate({orphan}, f.scenes, f.lib, tmp.str(), 1, 0.25, 0),
        doctest::Contains("bad-plan"), Error);
}
