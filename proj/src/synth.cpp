#include "diimap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "diimap/error.hpp"

namespace diimap {

std::string_view to_string(FeatureKind k) {
    return k == FeatureKind::roads ? "roads" : "buildings";
}

FeatureKind feature_kind_from_string(std::string_view s) {
    if (s == "roads") return FeatureKind::roads;
    if (s == "buildings") return FeatureKind::buildings;
    throw ConfigError("feature_kind must be roads or buildings, got \"" + std::string(s) + "\"");
}

GridSpec ScenarioConfig::grid() const { return make_grid(width, height, cell_size); }

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("invalid scenario config: " + field + " " + why);
    };
    if (width < 1) fail("width", "must be >= 1");
    if (height < 1) fail("height", "must be >= 1");
    if (!(feature_density >= 0.0)) fail("feature_density", "must be >= 0");
    if (road_width < 1) fail("road_width", "must be >= 1");
    if (building_min < 1) fail("building_min", "must be >= 1");
    if (building_max < building_min) fail("building_max", "must be >= building_min");
    if (cell_size < 1) fail("cell_size", "must be >= 1");
    if (!(removal_prob >= 0.0 && removal_prob <= 1.0)) fail("removal_prob", "must be in [0,1]");
    if (!(speckle_rate >= 0.0 && speckle_rate <= 1.0)) fail("speckle_rate", "must be in [0,1]");
    if (!(tau >= 0.0)) fail("tau", "must be >= 0");
    const GridSpec spec = grid();
    for (const auto& [row, col] : footprint_cells) {
        if (row < 0 || row >= spec.rows || col < 0 || col >= spec.cols) {
            fail("footprint_cells",
                 "cell (" + std::to_string(row) + "," + std::to_string(col) +
                     ") outside the " + std::to_string(spec.rows) + "x" +
                     std::to_string(spec.cols) + " grid");
        }
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stage tags keep the per-stage streams independent of one another.
constexpr std::uint64_t kStageFeatures = 0x66656174ULL;
constexpr std::uint64_t kStageRemoval = 0x72656d6fULL;
constexpr std::uint64_t kStageSpeckleBefore = 0x73706b62ULL;
constexpr std::uint64_t kStageSpeckleAfter = 0x73706b61ULL;

std::mt19937_64 stage_rng(std::uint64_t seed, std::uint64_t stage) {
    return std::mt19937_64(splitmix64(seed ^ stage));
}

// Unbiased integer in [0, bound) by masked rejection; bound >= 1.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        const std::uint64_t v = rng() & mask;
        if (v < bound) return v;
    }
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Uniform in [0,1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void stamp_brush(BinaryMask& mask, int cx, int cy, int brush) {
    const int lo = -(brush - 1) / 2;
    const int hi = brush / 2;
    for (int dy = lo; dy <= hi; ++dy) {
        for (int dx = lo; dx <= hi; ++dx) {
            const int x = cx + dx;
            const int y = cy + dy;
            if (mask.in_bounds(x, y)) mask.set(x, y, true);
        }
    }
}

void stamp_segment(BinaryMask& mask, int x0, int y0, int x1, int y1, int brush) {
    // Bresenham; integer-only so rasterization is platform independent.
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0;
    int y = y0;
    for (;;) {
        stamp_brush(mask, x, y, brush);
        if (x == x1 && y == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

std::uint64_t feature_count(const ScenarioConfig& cfg) {
    const double mp = static_cast<double>(cfg.width) * static_cast<double>(cfg.height) / 1e6;
    return static_cast<std::uint64_t>(std::llround(cfg.feature_density * mp));
}

BinaryMask rasterize_features(const ScenarioConfig& cfg) {
    BinaryMask before(cfg.width, cfg.height);
    std::mt19937_64 rng = stage_rng(cfg.seed, kStageFeatures);
    const std::uint64_t n = feature_count(cfg);

    if (cfg.feature_kind == FeatureKind::roads) {
        const int step = std::max(8, std::min(cfg.width, cfg.height) / 4);
        for (std::uint64_t i = 0; i < n; ++i) {
            int x = uniform_int(rng, 0, cfg.width - 1);
            int y = uniform_int(rng, 0, cfg.height - 1);
            for (int seg = 0; seg < 3; ++seg) {
                int dx = 0;
                int dy = 0;
                while (dx == 0 && dy == 0) {
                    dx = uniform_int(rng, -step, step);
                    dy = uniform_int(rng, -step, step);
                }
                const int nx = std::clamp(x + dx, 0, cfg.width - 1);
                const int ny = std::clamp(y + dy, 0, cfg.height - 1);
                stamp_segment(before, x, y, nx, ny, cfg.road_width);
                x = nx;
                y = ny;
            }
        }
    } else {
        for (std::uint64_t i = 0; i < n; ++i) {
            const int bw = std::min(uniform_int(rng, cfg.building_min, cfg.building_max), cfg.width);
            const int bh =
                std::min(uniform_int(rng, cfg.building_min, cfg.building_max), cfg.height);
            const int x0 = uniform_int(rng, 0, cfg.width - bw);
            const int y0 = uniform_int(rng, 0, cfg.height - bh);
            for (int y = y0; y < y0 + bh; ++y) {
                for (int x = x0; x < x0 + bw; ++x) before.set(x, y, true);
            }
        }
    }
    return before;
}

BinaryMask shift_mask(const BinaryMask& src, int dx, int dy) {
    BinaryMask out(src.width(), src.height());
    for (int y = 0; y < src.height(); ++y) {
        for (int x = 0; x < src.width(); ++x) {
            const int sx = x - dx;
            const int sy = y - dy;
            if (src.in_bounds(sx, sy) && src.at(sx, sy)) out.set(x, y, true);
        }
    }
    return out;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const GridSpec spec = cfg.grid();

    BinaryMask before = rasterize_features(cfg);
    BinaryMask after = before;
    ChangeMask truth_change(cfg.width, cfg.height);

    // Removal draws one uniform per feature pixel of every footprint cell in
    // canonical cell order, whatever removal_prob is; raising the probability
    // under the same seed can therefore only grow the removed set.
    {
        std::vector<std::pair<int, int>> cells = cfg.footprint_cells;
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        std::mt19937_64 rng = stage_rng(cfg.seed, kStageRemoval);
        for (const auto& [row, col] : cells) {
            const GridSpec::CellRect rect = spec.cell_rect(row, col);
            for (int y = rect.y0; y < rect.y1; ++y) {
                for (int x = rect.x0; x < rect.x1; ++x) {
                    if (!before.at(x, y)) continue;
                    if (uniform_unit(rng) < cfg.removal_prob) {
                        after.set(x, y, false);
                        truth_change.set(x, y, true);
                    }
                }
            }
        }
    }

    if (cfg.jitter_dx != 0 || cfg.jitter_dy != 0) {
        after = shift_mask(after, cfg.jitter_dx, cfg.jitter_dy);
    }

    if (cfg.speckle_rate > 0.0) {
        // Planted change pixels are exempt from before-mask toggles; without
        // that the recorded truth would no longer be a subset of the mask.
        std::mt19937_64 rng_b = stage_rng(cfg.seed, kStageSpeckleBefore);
        for (int y = 0; y < cfg.height; ++y) {
            for (int x = 0; x < cfg.width; ++x) {
                if (uniform_unit(rng_b) < cfg.speckle_rate && !truth_change.at(x, y)) {
                    before.set(x, y, !before.at(x, y));
                }
            }
        }
        std::mt19937_64 rng_a = stage_rng(cfg.seed, kStageSpeckleAfter);
        for (int y = 0; y < cfg.height; ++y) {
            for (int x = 0; x < cfg.width; ++x) {
                if (uniform_unit(rng_a) < cfg.speckle_rate) {
                    after.set(x, y, !after.at(x, y));
                }
            }
        }
    }

    ImpactMap truth_impact =
        grid_truth(truth_change, before, spec, cfg.truth_rule, cfg.tau);
    return Scenario{std::move(before), std::move(after), std::move(truth_change),
                    std::move(truth_impact)};
}

}  // namespace diimap
