#include <doctest.h>

#include <json.hpp>
#include <string>

#include "diimap/error.hpp"
#include "diimap/report.hpp"
#include "helpers.hpp"

using namespace diimap;
using nlohmann::json;
using testutil::mask_from_art;
using testutil::read_file;
using testutil::write_file;

namespace {

// Same two-cell worked example as the impact tests: dii = [0.5, 0.0],
// impacted = [1, 0] at tau 0.01.
DiiGrid worked_grid() {
    const BinaryMask before = mask_from_art(
        "####.#..\n"
        "####.#..\n"
        ".....#..\n"
        ".....#..\n");
    const BinaryMask change = mask_from_art(
        "##......\n"
        "#.......\n"
        "........\n"
        "........\n");
    return compute_dii(change, before, make_grid(8, 4, 4));
}

double shoelace(const json& ring) {
    double area2 = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const double px = ring[i][0].get<double>();
        const double py = ring[i][1].get<double>();
        const double qx = ring[i + 1][0].get<double>();
        const double qy = ring[i + 1][1].get<double>();
        area2 += px * qy - qx * py;
    }
    return area2;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format_double prints the shortest round-trip form") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.01) == "0.01");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(2.0 / 3.0) == "0.6666666666666666");
}

TEST_CASE("format_ratio always shows four decimals") {
    CHECK(format_ratio(1.0) == "1.0000");
    CHECK(format_ratio(0.5) == "0.5000");
    CHECK(format_ratio(2.0 / 3.0) == "0.6667");
    CHECK(format_ratio(0.49999999999999994) == "0.5000");
    CHECK(format_ratio(0.0) == "0.0000");
}

TEST_CASE("write_dii_csv emits the exact golden table") {
    const testutil::ScratchDir dir("dii_csv");
    const DiiGrid grid = worked_grid();
    const ImpactMap impact = threshold_dii(grid, 0.01);
    const auto path = dir / "dii.csv";
    write_dii_csv(path, grid, impact);
    CHECK(read_file(path) ==
          "# diimap grid cell_size=4 width=8 height=4 tau=0.01\n"
          "row,col,change_count,before_count,dii,impacted\n"
          "0,0,3,8,0.5,1\n"
          "0,1,0,4,0,0\n");
}

TEST_CASE("write_impact_csv emits the exact golden table") {
    const testutil::ScratchDir dir("impact_csv");
    const ImpactMap impact = threshold_dii(worked_grid(), 0.01);
    const auto path = dir / "impact.csv";
    write_impact_csv(path, impact);
    CHECK(read_file(path) ==
          "# diimap grid cell_size=4 width=8 height=4 tau=0.01\n"
          "row,col,impacted\n"
          "0,0,1\n"
          "0,1,0\n");
}

TEST_CASE("write_dii_csv rejects mismatched grid and impact map") {
    const testutil::ScratchDir dir("dii_mismatch");
    const DiiGrid grid = worked_grid();
    ImpactMap other = threshold_dii(grid, 0.01);
    other.spec = make_grid(8, 8, 4);
    other.impacted.resize(static_cast<std::size_t>(other.spec.cell_count()), 0);
    CHECK_THROWS_AS(write_dii_csv(dir / "dii.csv", grid, other), DimensionMismatch);
}

TEST_CASE("read_grid_csv round-trips both table flavors") {
    const testutil::ScratchDir dir("roundtrip");
    const DiiGrid grid = worked_grid();
    const ImpactMap impact = threshold_dii(grid, 0.01);

    write_dii_csv(dir / "dii.csv", grid, impact);
    CHECK(read_grid_csv(dir / "dii.csv") == impact);

    write_impact_csv(dir / "impact.csv", impact);
    CHECK(read_grid_csv(dir / "impact.csv") == impact);
}

TEST_CASE("read_grid_csv tolerates CRLF endings and blank trailing lines") {
    const testutil::ScratchDir dir("crlf");
    const auto path = dir / "grid.csv";
    write_file(path,
               "# diimap grid cell_size=4 width=8 height=4 tau=0.01\r\n"
               "row,col,impacted\r\n"
               "0,0,1\r\n"
               "0,1,0\r\n"
               "\r\n");
    const ImpactMap map = read_grid_csv(path);
    CHECK(map.impacted == std::vector<std::uint8_t>{1, 0});
    CHECK(map.tau == 0.01);
    CHECK(map.spec == make_grid(8, 4, 4));
}

TEST_CASE("read_grid_csv rejects malformed inputs with the path in the message") {
    const testutil::ScratchDir dir("bad_grid");
    const std::string meta = "# diimap grid cell_size=4 width=8 height=4 tau=0.01\n";

    CHECK_THROWS_AS(read_grid_csv(dir / "absent.csv"), IoError);

    auto expect_format_error = [&](const std::string& name, const std::string& body,
                                   const std::string& needle) {
        const auto path = dir / name;
        write_file(path, body);
        try {
            read_grid_csv(path);
            FAIL("expected FormatError for " << name);
        } catch (const FormatError& e) {
            const std::string msg = e.what();
            CAPTURE(name);
            CAPTURE(msg);
            CHECK(msg.find(needle) != std::string::npos);
            CHECK(msg.find(name) != std::string::npos);
        }
    };

    expect_format_error("nometa.csv", "row,col,impacted\n0,0,1\n0,1,0\n", "metadata");
    expect_format_error("nosize.csv", "# diimap grid tau=0.01\nrow,col,impacted\n", "cell_size");
    expect_format_error("noheader.csv", meta, "header");
    expect_format_error("badheader.csv", meta + "row,col,value\n0,0,1\n0,1,0\n", "impacted");
    expect_format_error("shortrow.csv", meta + "row,col,impacted\n0,0\n0,1,0\n", "fields");
    expect_format_error("range.csv", meta + "row,col,impacted\n0,0,1\n0,5,0\n", "outside");
    expect_format_error("dupe.csv", meta + "row,col,impacted\n0,0,1\n0,0,0\n", "duplicate");
    expect_format_error("truncated.csv", meta + "row,col,impacted\n0,0,1\n", "expected");
    expect_format_error("nonnum.csv", meta + "row,col,impacted\n0,zero,1\n0,1,0\n", "malformed");
}

TEST_CASE("metrics_csv emits the golden summary rows") {
    const EvalReport pixel = report_from_counts(ConfusionCounts{2, 0, 2, 96}, "pixel");
    const EvalReport grid = report_from_counts(ConfusionCounts{1, 0, 0, 3}, "grid");
    CHECK(metrics_csv({pixel, grid}) ==
          "setting,precision,recall,f1,iou,tp,fp,fn,tn\n"
          "pixel,1.0000,0.5000,0.6667,0.5000,2,0,2,96\n"
          "grid,1.0000,1.0000,1.0000,1.0000,1,0,0,3\n");
}

TEST_CASE("write_metrics_csv writes the same bytes to disk") {
    const testutil::ScratchDir dir("metrics");
    const std::vector<EvalReport> reports{report_from_counts(ConfusionCounts{0, 0, 0, 4}, "grid")};
    const auto path = dir / "metrics.csv";
    write_metrics_csv(path, reports);
    CHECK(read_file(path) == metrics_csv(reports));
}

TEST_CASE("geojson carries one counterclockwise polygon per impacted cell") {
    const testutil::ScratchDir dir("geojson");
    const DiiGrid grid = worked_grid();
    const ImpactMap impact = threshold_dii(grid, 0.01);
    const auto path = dir / "impact.geojson";
    write_impact_geojson(path, impact, &grid);

    const json doc = json::parse(read_file(path));
    CHECK(doc["type"] == "FeatureCollection");
    REQUIRE(doc["features"].size() == 1);

    const json& feature = doc["features"][0];
    CHECK(feature["type"] == "Feature");
    CHECK(feature["geometry"]["type"] == "Polygon");
    CHECK(feature["properties"]["row"] == 0);
    CHECK(feature["properties"]["col"] == 0);
    CHECK(feature["properties"]["dii"] == 0.5);

    const json& ring = feature["geometry"]["coordinates"][0];
    REQUIRE(ring.size() == 5);
    CHECK(ring.front() == ring.back());
    CHECK(shoelace(ring) > 0.0);
    // Pixel-frame corners of cell (0,0) with cell_size 4.
    CHECK(ring[0] == json::array({0.0, 0.0}));
    CHECK(ring[1] == json::array({4.0, 0.0}));
    CHECK(ring[2] == json::array({4.0, 4.0}));
    CHECK(ring[3] == json::array({0.0, 4.0}));
}

TEST_CASE("geojson omits dii properties when no grid is supplied") {
    const testutil::ScratchDir dir("geojson_nodii");
    const ImpactMap impact = threshold_dii(worked_grid(), 0.01);
    const auto path = dir / "impact.geojson";
    write_impact_geojson(path, impact);
    const json doc = json::parse(read_file(path));
    REQUIRE(doc["features"].size() == 1);
    CHECK_FALSE(doc["features"][0]["properties"].contains("dii"));
}

TEST_CASE("geojson with no impacted cells is an empty collection") {
    const testutil::ScratchDir dir("geojson_empty");
    const ImpactMap impact = threshold_dii(worked_grid(), 1.0);
    const auto path = dir / "impact.geojson";
    write_impact_geojson(path, impact);
    const json doc = json::parse(read_file(path));
    CHECK(doc["type"] == "FeatureCollection");
    CHECK(doc["features"].empty());
}

TEST_CASE("a y-flipping world transform still yields counterclockwise rings") {
    const testutil::ScratchDir dir("geojson_world");
    const DiiGrid grid = worked_grid();
    const ImpactMap impact = threshold_dii(grid, 0.01);
    WorldTransform world;
    world.a = 1.0;
    world.e = -1.0;  // north-up raster: y decreases with row
    world.c = 100.0;
    world.f = 200.0;
    const auto path = dir / "impact.geojson";
    write_impact_geojson(path, impact, &grid, world);

    const json doc = json::parse(read_file(path));
    REQUIRE(doc["features"].size() == 1);
    const json& ring = doc["features"][0]["geometry"]["coordinates"][0];
    REQUIRE(ring.size() == 5);
    CHECK(shoelace(ring) > 0.0);
    // Corner (0,0) maps to a*(0-0.5)+c = 99.5, e*(0-0.5)+f = 200.5; corner
    // (4,4) to 103.5, 196.5. The flip means the emitted ring is re-ordered.
    CHECK(ring[0] == json::array({99.5, 200.5}));
    CHECK(ring[1] == json::array({99.5, 196.5}));
    CHECK(ring[2] == json::array({103.5, 196.5}));
    CHECK(ring[3] == json::array({103.5, 200.5}));
}

}  // TEST_SUITE
