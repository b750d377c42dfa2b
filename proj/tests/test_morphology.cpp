#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "diimap/error.hpp"
#include "diimap/morphology.hpp"
#include "helpers.hpp"

using namespace diimap;
using testutil::mask_from_art;
using testutil::random_mask;

namespace {

// Independent oracle: O(pixels * disk) dilation straight from the definition.
BinaryMask dilate_oracle(const BinaryMask& mask, int radius) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    if (dx * dx + dy * dy > radius * radius) continue;
                    const int nx = x + dx, ny = y + dy;
                    if (out.in_bounds(nx, ny)) out.set(nx, ny, true);
                }
            }
        }
    }
    return out;
}

// Independent oracle: breadth-first flood fill, deliberately a different
// algorithm from the two-pass union-find under test.
std::vector<std::int32_t> flood_fill_oracle(const BinaryMask& mask, int connectivity) {
    const int w = mask.width(), h = mask.height();
    std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h, 0);
    std::int32_t next = 0;
    std::deque<std::pair<int, int>> queue;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!mask.at(sx, sy) || labels[static_cast<std::size_t>(sy) * w + sx] != 0) continue;
            ++next;
            labels[static_cast<std::size_t>(sy) * w + sx] = next;
            queue.push_back({sx, sy});
            while (!queue.empty()) {
                const auto [x, y] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == 4 && dx != 0 && dy != 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
                        auto& l = labels[static_cast<std::size_t>(ny) * w + nx];
                        if (l == 0) {
                            l = next;
                            queue.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    return labels;
}

// True when the two labelings induce the same partition of the true pixels.
bool same_partition(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a.size() != b.size()) return false;
    std::map<std::int32_t, std::int32_t> a2b, b2a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == 0) != (b[i] == 0)) return false;
        if (a[i] == 0) continue;
        auto [ita, inserted_a] = a2b.try_emplace(a[i], b[i]);
        if (!inserted_a && ita->second != b[i]) return false;
        auto [itb, inserted_b] = b2a.try_emplace(b[i], a[i]);
        if (!inserted_b && itb->second != a[i]) return false;
    }
    return true;
}

BinaryMask center_pixel(int size) {
    BinaryMask mask(size, size);
    mask.set(size / 2, size / 2, true);
    return mask;
}

bool subset_of(const BinaryMask& small, const BinaryMask& big) {
    for (int y = 0; y < small.height(); ++y)
        for (int x = 0; x < small.width(); ++x)
            if (small.at(x, y) && !big.at(x, y)) return false;
    return true;
}

}  // namespace

TEST_SUITE("morphology") {

TEST_CASE("dilation by radius 0 is the identity") {
    const BinaryMask mask = random_mask(40, 30, 0.2, 9);
    CHECK(dilate(mask, 0) == mask);
}

TEST_CASE("single-pixel dilation hits the disk lattice counts") {
    CHECK(dilate(center_pixel(11), 0).count_true() == 1);
    CHECK(dilate(center_pixel(11), 1).count_true() == 5);
    CHECK(dilate(center_pixel(11), 2).count_true() == 13);
    CHECK(dilate(center_pixel(21), 5).count_true() == 81);
}

TEST_CASE("radius-1 dilation of a point is the plus shape") {
    const BinaryMask got = dilate(center_pixel(5), 1);
    CHECK(got == mask_from_art(".....\n"
                               "..#..\n"
                               ".###.\n"
                               "..#..\n"
                               "....."));
}

TEST_CASE("dilation matches the brute-force oracle on random masks") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const BinaryMask mask = random_mask(64, 64, 0.05, 1000 + seed);
        for (int radius : {1, 2, 5}) {
            CAPTURE(seed);
            CAPTURE(radius);
            CHECK(dilate(mask, radius) == dilate_oracle(mask, radius));
        }
    }
}

TEST_CASE("dilation clips at the raster border") {
    BinaryMask corner(8, 8);
    corner.set(0, 0, true);
    CHECK(dilate(corner, 2) == dilate_oracle(corner, 2));
    // Quarter disk: offsets with dx,dy >= 0 and dx^2+dy^2 <= 4.
    CHECK(dilate(corner, 2).count_true() == 6);
}

TEST_CASE("dilation is extensive and monotone in the radius") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BinaryMask mask = random_mask(48, 48, 0.05, 2000 + seed);
        const BinaryMask r1 = dilate(mask, 1);
        const BinaryMask r3 = dilate(mask, 3);
        CHECK(subset_of(mask, r1));
        CHECK(subset_of(r1, r3));
    }
}

TEST_CASE("dilation commutes with translation away from borders") {
    BinaryMask mask(32, 32);
    mask.set(10, 12, true);
    mask.set(14, 15, true);
    BinaryMask shifted(32, 32);
    shifted.set(11, 12, true);
    shifted.set(15, 15, true);

    const BinaryMask a = dilate(mask, 3);
    const BinaryMask b = dilate(shifted, 3);
    for (int y = 0; y < 32; ++y)
        for (int x = 1; x < 32; ++x) CHECK(b.at(x, y) == a.at(x - 1, y));
}

TEST_CASE("dilation output is identical across thread counts") {
    const BinaryMask mask = random_mask(101, 67, 0.08, 4242);
    const BinaryMask one = dilate(mask, 5, 1);
    for (int threads : {2, 3, 8}) {
        CHECK(dilate(mask, 5, threads) == one);
    }
}

TEST_CASE("diagonal adjacency depends on connectivity") {
    const BinaryMask mask = mask_from_art("#.\n.#");

    const ComponentMap eight = label_components(mask, 8);
    CHECK(eight.component_count() == 1);
    CHECK(eight.sizes[1] == 2);

    const ComponentMap four = label_components(mask, 4);
    CHECK(four.component_count() == 2);
    CHECK(four.sizes[1] == 1);
    CHECK(four.sizes[2] == 1);
}

TEST_CASE("labels are contiguous and in first-encounter raster order") {
    const ComponentMap cm = label_components(mask_from_art("#..#\n"
                                                           "#...\n"
                                                           "...#"),
                                             4);
    REQUIRE(cm.component_count() == 3);
    CHECK(cm.labels[0] == 1);   // (0,0) seen first
    CHECK(cm.labels[3] == 2);   // (3,0) second
    CHECK(cm.labels[4] == 1);   // joins the first column component
    CHECK(cm.labels[11] == 3);  // (3,2) third
    CHECK(cm.sizes[1] == 2);
    CHECK(cm.sizes[2] == 1);
    CHECK(cm.sizes[3] == 1);
}

TEST_CASE("component sizes sum to the mask's true-pixel count") {
    const BinaryMask mask = random_mask(64, 64, 0.4, 31);
    const ComponentMap cm = label_components(mask, 8);
    std::uint64_t total = 0;
    for (std::size_t id = 1; id < cm.sizes.size(); ++id) {
        CHECK(cm.sizes[id] >= 1);
        total += cm.sizes[id];
    }
    CHECK(total == mask.count_true());
}

TEST_CASE("labeling matches the flood-fill oracle on 100 seeded masks") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        // Densities spanning sparse dust to nearly solid, where the union-find
        // merge paths get complicated.
        const double density = 0.05 + 0.009 * static_cast<double>(seed);
        const BinaryMask mask = random_mask(64, 64, density, 5000 + seed);
        for (int connectivity : {4, 8}) {
            CAPTURE(seed);
            CAPTURE(connectivity);
            CHECK(same_partition(label_components(mask, connectivity).labels,
                                 flood_fill_oracle(mask, connectivity)));
        }
    }
}

TEST_CASE("labeling matches the flood-fill oracle exhaustively on 3x3 masks") {
    for (unsigned bits = 0; bits < 512; ++bits) {
        BinaryMask mask(3, 3);
        for (int i = 0; i < 9; ++i) mask.set(i % 3, i / 3, (bits >> i) & 1u);
        for (int connectivity : {4, 8}) {
            CAPTURE(bits);
            CHECK(same_partition(label_components(mask, connectivity).labels,
                                 flood_fill_oracle(mask, connectivity)));
        }
    }
}

TEST_CASE("connectivity outside {4,8} is rejected") {
    CHECK_THROWS_AS(label_components(BinaryMask(2, 2), 6), ConfigError);
}

TEST_CASE("the removal boundary is strict less-than") {
    // A 40x25 solid rectangle is exactly 1000 pixels: kept at min_size 1000.
    BinaryMask rect(50, 30);
    for (int y = 0; y < 25; ++y)
        for (int x = 0; x < 40; ++x) rect.set(x, y, true);
    REQUIRE(rect.count_true() == 1000);
    CHECK(remove_small_components(rect, 1000, 8) == rect);

    // Shave one pixel off: 999 < 1000, the whole component goes.
    BinaryMask shaved = rect;
    shaved.set(39, 24, false);
    REQUIRE(shaved.count_true() == 999);
    CHECK(remove_small_components(shaved, 1000, 8).count_true() == 0);
}

TEST_CASE("removal keeps big components while dropping dust") {
    const BinaryMask mask = mask_from_art("###...#\n"
                                          "###....\n"
                                          "......#");
    const BinaryMask cleaned = remove_small_components(mask, 2, 8);
    CHECK(cleaned == mask_from_art("###....\n"
                                   "###....\n"
                                   "......."));
}

TEST_CASE("removal on an empty mask is a no-op for any min_size") {
    const BinaryMask empty(16, 16);
    CHECK(remove_small_components(empty, 0, 8) == empty);
    CHECK(remove_small_components(empty, 1000000, 4) == empty);
}

TEST_CASE("removal is idempotent and never adds pixels") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BinaryMask mask = random_mask(64, 64, 0.25, 7000 + seed);
        const BinaryMask once = remove_small_components(mask, 5, 8);
        CHECK(remove_small_components(once, 5, 8) == once);
        CHECK(subset_of(once, mask));
    }
}

}  // TEST_SUITE
