#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "util.hpp"

#include "pastegen/error.hpp"
#include "pastegen/labels.hpp"
#include "pastegen/rng.hpp"

using namespace pastegen;
using testutil::TempDir;

TEST_CASE("to_normalized hand cases") {
    CHECK(to_normalized(0, {0, 0, 100, 200}, 100, 200).cx == doctest::Approx(0.5));
    CHECK(to_normalized(0, {0, 0, 100, 200}, 100, 200).w == doctest::Approx(1.0));

    const AnnotationRecord r = to_normalized(2, {10, 20, 30, 40}, 100, 200);
    CHECK(r.category_id == 2);
    CHECK(r.cx == doctest::Approx(0.25));
    CHECK(r.cy == doctest::Approx(0.2));
    CHECK(r.w == doctest::Approx(0.3));
    CHECK(r.h == doctest::Approx(0.2));

    const AnnotationRecord tiny = to_normalized(0, {0, 0, 1, 1}, 1, 1);
    CHECK(tiny.cx == doctest::Approx(0.5));
    CHECK(tiny.w == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS(to_normalized(0, {90, 0, 20, 5}, 100, 100),
                         doctest::Contains("bbox-out-of-bounds"), Error);
}

TEST_CASE("label formatting contract") {
    AnnotationRecord r;
    r.category_id = 0;
    r.cx = 0.5;
    r.cy = 0.5;
    r.w = 1.0;
    r.h = 1.0;
    CHECK(format_label_line(r) == "0 0.500000 0.500000 1.000000 1.000000\n");
}

TEST_CASE("write/read: bytes and values") {
    TempDir tmp("labels");

    SUBCASE("empty list gives a zero-byte file") {
        write_labels({}, tmp.file("empty.txt"));
        std::ifstream in(tmp.file("empty.txt"), std::ios::binary | std::ios::ate);
        CHECK(in.tellg() == 0);
        CHECK(read_labels(tmp.file("empty.txt")).empty());
    }

    SUBCASE("explicit line parse") {
        std::ofstream(tmp.file("one.txt")) << "1 0.25 0.2 0.3 0.2\n";
        const auto records = read_labels(tmp.file("one.txt"));
        REQUIRE(records.size() == 1);
        CHECK(records[0].category_id == 1);
        CHECK(records[0].cx == doctest::Approx(0.25));
        CHECK(records[0].h == doctest::Approx(0.2));
    }

    SUBCASE("round trip reproduces values to 1e-6 and canonical bytes") {
        Rng rng(9);
        std::vector<AnnotationRecord> records;
        for (int i = 0; i < 200; ++i) {
            AnnotationRecord r;
            r.category_id = static_cast<int>(rng.next_below(20));
            r.w = 0.01 + 0.98 * rng.next_double();
            r.h = 0.01 + 0.98 * rng.next_double();
            r.cx = r.w / 2 + (1.0 - r.w) * rng.next_double();
            r.cy = r.h / 2 + (1.0 - r.h) * rng.next_double();
            records.push_back(r);
        }
        write_labels(records, tmp.file("rt.txt"));
        const auto back = read_labels(tmp.file("rt.txt"));
        REQUIRE(back.size() == records.size());
        for (size_t i = 0; i < records.size(); ++i) {
            CHECK(std::fabs(back[i].cx - records[i].cx) <= 1e-6);
            CHECK(std::fabs(back[i].cy - records[i].cy) <= 1e-6);
            CHECK(std::fabs(back[i].w - records[i].w) <= 1e-6);
            CHECK(std::fabs(back[i].h - records[i].h) <= 1e-6);
            CHECK(back[i].category_id == records[i].category_id);
        }
        // write(read(text)) is canonical: rewriting the parsed records
        // reproduces the file byte for byte.
        write_labels(back, tmp.file("rt2.txt"));
        std::ifstream a(tmp.file("rt.txt"), std::ios::binary);
        std::ifstream b(tmp.file("rt2.txt"), std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }

    SUBCASE("malformed lines carry line numbers") {
        std::ofstream(tmp.file("bad.txt")) << "0 0.5 0.5 1.0 1.0\n0 0.5 0.5 1.0\n";
        try {
            read_labels(tmp.file("bad.txt"));
            FAIL("expected parse error");
        } catch (const Error& e) {
            CHECK(e.code() == "label-parse");
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }

    SUBCASE("values outside [0,1] are rejected") {
        std::ofstream(tmp.file("range.txt")) << "0 1.5 0.5 1.0 1.0\n";
        CHECK_THROWS_WITH_AS(read_labels(tmp.file("range.txt")),
                             doctest::Contains("label-parse"), Error);
    }

    SUBCASE("double spaces are rejected") {
        std::ofstream(tmp.file("sp.txt")) << "0  0.5 0.5 1.0 1.0\n";
        CHECK_THROWS_AS(read_labels(tmp.file("sp.txt")), Error);
    }
}

TEST_CASE("classes and train lists") {
    TempDir tmp("classes");
    write_classes({"cup", "bottle", "snack"}, tmp.file("classes.txt"));
    const auto names = read_classes(tmp.file("classes.txt"));
    REQUIRE(names.size() == 3);
    CHECK(names[1] == "bottle");

    write_train_list({"a/img_0.png", "a/img_1.png"}, tmp.file("train.txt"));
    const auto paths = read_train_list(tmp.file("train.txt"));
    REQUIRE(paths.size() == 2);
    CHECK(paths[0] == "a/img_0.png");
}
