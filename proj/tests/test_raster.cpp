#include <doctest.h>

#include <string>

#include "diimap/error.hpp"
#include "diimap/raster.hpp"
#include "helpers.hpp"

using namespace diimap;
using testutil::ScratchDir;

TEST_SUITE("raster") {

TEST_CASE("PGM P5 samples decode with nonzero = feature") {
    ScratchDir dir("raster_pgm");
    testutil::write_file(dir / "a.pgm", std::string("P5\n2 2\n255\n") +
                                            std::string("\x00\xff\x00\xff", 4));
    const BinaryMask mask = load_mask(dir / "a.pgm");
    CHECK(mask.width() == 2);
    CHECK(mask.height() == 2);
    CHECK_FALSE(mask.at(0, 0));
    CHECK(mask.at(1, 0));
    CHECK_FALSE(mask.at(0, 1));
    CHECK(mask.at(1, 1));
}

TEST_CASE("all-zero PGM decodes to an all-false mask") {
    ScratchDir dir("raster_zero");
    testutil::write_file(dir / "z.pgm", std::string("P5\n3 1\n255\n") + std::string(3, '\0'));
    const BinaryMask mask = load_mask(dir / "z.pgm");
    CHECK(mask.count_true() == 0);
    CHECK(mask.width() == 3);
    CHECK(mask.height() == 1);
}

TEST_CASE("antialiased samples count as features") {
    ScratchDir dir("raster_aa");
    testutil::write_file(dir / "aa.pgm", std::string("P5\n3 1\n255\n") + std::string("\x00\x07\x80", 3));
    const BinaryMask mask = load_mask(dir / "aa.pgm");
    CHECK_FALSE(mask.at(0, 0));
    CHECK(mask.at(1, 0));
    CHECK(mask.at(2, 0));
}

TEST_CASE("header comments and odd whitespace are tolerated") {
    ScratchDir dir("raster_comments");
    testutil::write_file(dir / "c.pgm",
                         std::string("P5 # magic\n# a comment line\n  2\t1 # dims\n255\n") +
                             std::string("\xff\x00", 2));
    const BinaryMask mask = load_mask(dir / "c.pgm");
    CHECK(mask.at(0, 0));
    CHECK_FALSE(mask.at(1, 0));
}

TEST_CASE("save encodes features as 255 and background as 0") {
    ScratchDir dir("raster_save");

    BinaryMask empty(4, 4);
    save_mask(empty, dir / "empty.pgm");
    const std::string empty_bytes = testutil::read_file(dir / "empty.pgm");
    CHECK(empty_bytes.substr(empty_bytes.size() - 16) == std::string(16, '\0'));

    BinaryMask full(2, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 2; ++x) full.set(x, y, true);
    save_mask(full, dir / "full.pgm");
    const std::string full_bytes = testutil::read_file(dir / "full.pgm");
    CHECK(full_bytes.substr(full_bytes.size() - 6) == std::string(6, '\xff'));
}

TEST_CASE("save/load round-trips seeded random masks exactly") {
    ScratchDir dir("raster_roundtrip");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BinaryMask mask = testutil::random_mask(64, 64, 0.3, seed);
        save_mask(mask, dir / "m.pgm");
        const BinaryMask back = load_mask(dir / "m.pgm");
        CAPTURE(seed);
        CHECK(back == mask);
        // A second save of the loaded mask is byte-identical, so files diff
        // cleanly in downstream tooling.
        save_mask(back, dir / "m2.pgm");
        CHECK(testutil::read_file(dir / "m.pgm") == testutil::read_file(dir / "m2.pgm"));
    }
}

TEST_CASE("PNG round-trip when built with libpng") {
    if (!png_supported()) return;
    ScratchDir dir("raster_png");
    const BinaryMask mask = testutil::random_mask(48, 32, 0.4, 77);
    save_mask(mask, dir / "m.png");
    CHECK(load_mask(dir / "m.png") == mask);
}

TEST_CASE("malformed inputs fail with the offending path in the message") {
    ScratchDir dir("raster_bad");

    CHECK_THROWS_AS(load_mask(dir / "missing.pgm"), IoError);

    testutil::write_file(dir / "magic.pgm", "P6\n2 2\n255\n....");
    CHECK_THROWS_AS(load_mask(dir / "magic.pgm"), FormatError);

    testutil::write_file(dir / "short.pgm", std::string("P5\n4 4\n255\n") + std::string(3, '\0'));
    CHECK_THROWS_AS(load_mask(dir / "short.pgm"), FormatError);

    testutil::write_file(dir / "maxval.pgm", std::string("P5\n1 1\n70000\n") + std::string(2, '\0'));
    CHECK_THROWS_AS(load_mask(dir / "maxval.pgm"), FormatError);

    try {
        load_mask(dir / "magic.pgm");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("magic.pgm") != std::string::npos);
    }
}

TEST_CASE("make_pair accepts equal shapes and reports both on mismatch") {
    CHECK_NOTHROW(diimap::make_pair(BinaryMask(4, 4), BinaryMask(4, 4)));
    CHECK_NOTHROW(diimap::make_pair(BinaryMask(256, 256), BinaryMask(256, 256)));
    try {
        diimap::make_pair(BinaryMask(4, 4), BinaryMask(4, 5));
        FAIL("expected DimensionMismatch");
    } catch (const DimensionMismatch& e) {
        const std::string msg = e.what();
        CHECK(msg.find("4x4") != std::string::npos);
        CHECK(msg.find("4x5") != std::string::npos);
    }
}

TEST_CASE("mask construction validates dimensions and normalizes pixels") {
    CHECK_THROWS_AS(BinaryMask(0, 5), ConfigError);
    CHECK_THROWS_AS(BinaryMask(5, 0), ConfigError);
    CHECK_THROWS_AS(BinaryMask(2, 2, std::vector<std::uint8_t>{1, 0, 1}), ConfigError);

    const BinaryMask mask(2, 2, {0, 7, 255, 1});
    CHECK_FALSE(mask.at(0, 0));
    CHECK(mask.at(1, 0));
    CHECK(mask.at(0, 1));
    CHECK(mask.at(1, 1));
    CHECK(mask.pixels() == std::vector<std::uint8_t>{0, 1, 1, 1});
}

TEST_CASE("world file parses in A,D,B,E,C,F order and maps pixel centers") {
    ScratchDir dir("raster_world");
    testutil::write_file(dir / "m.wld", "2.0\n0.0\n0.0\n-2.0\n100.0\n50.0\n");
    const WorldTransform w = read_world_file(dir / "m.wld");
    CHECK(w.a == 2.0);
    CHECK(w.e == -2.0);
    CHECK(w.c == 100.0);
    CHECK(w.f == 50.0);

    // The world file anchors the center of pixel (0,0); continuous pixel
    // coordinate (0.5, 0.5) is that center.
    double x = 0, y = 0;
    w.apply(0.5, 0.5, x, y);
    CHECK(x == 100.0);
    CHECK(y == 50.0);
    w.apply(1.5, 0.5, x, y);
    CHECK(x == 102.0);
    CHECK(y == 50.0);
}

TEST_CASE("world_file_for finds the .wld sidecar") {
    ScratchDir dir("raster_sidecar");
    const BinaryMask mask = testutil::random_mask(8, 8, 0.5, 1);
    save_mask(mask, dir / "m.pgm");
    CHECK_FALSE(world_file_for(dir / "m.pgm").has_value());
    testutil::write_file(dir / "m.wld", "1\n0\n0\n1\n0\n0\n");
    CHECK(world_file_for(dir / "m.pgm").has_value());

    testutil::write_file(dir / "bad.wld", "1\n0\nnot-a-number\n1\n0\n0\n");
    CHECK_THROWS_AS(read_world_file(dir / "bad.wld"), FormatError);
    testutil::write_file(dir / "shortw.wld", "1\n0\n0\n");
    CHECK_THROWS_AS(read_world_file(dir / "shortw.wld"), FormatError);
}

}  // TEST_SUITE
