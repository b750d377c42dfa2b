#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "diimap/change.hpp"
#include "diimap/impact.hpp"
#include "diimap/raster.hpp"

// Deterministic synthetic pre/post scenarios with planted ground truth.
// Features are rasterized into the before mask (roads as integer polylines
// with a square brush, buildings as axis-aligned rectangles). Inside the
// designated footprint cells, feature pixels disappear from the after mask
// with probability removal_prob; those pixels are the ground-truth change.
// The after mask is then shifted by the jitter offset, and toggle noise is
// applied to both masks. Jitter and speckle never enter truth_change, so a
// scenario measures exactly how well the pipeline rejects them.
//
// Reproducibility contract: all randomness comes from std::mt19937_64
// streams whose seeds are derived from ScenarioConfig::seed with splitmix64,
// one stream per stage (features, removal, before-speckle, after-speckle).
// Uniform values are mapped with masked rejection (integers) and a 53-bit
// shift (reals), never with std::uniform_*_distribution, so identical
// config + seed reproduces bit-identical scenarios on any platform.

namespace diimap {

enum class FeatureKind { roads, buildings };

std::string_view to_string(FeatureKind k);
FeatureKind feature_kind_from_string(std::string_view s);

struct ScenarioConfig {
    int width = 1024;
    int height = 1024;
    FeatureKind feature_kind = FeatureKind::roads;
    double feature_density = 40.0;  // features per megapixel
    int road_width = 5;
    int building_min = 12;  // building edge length range, pixels
    int building_max = 40;
    int cell_size = 256;
    std::vector<std::pair<int, int>> footprint_cells;  // (row, col)
    double removal_prob = 1.0;
    double speckle_rate = 0.0;
    int jitter_dx = 0;
    int jitter_dy = 0;
    TruthRule truth_rule = TruthRule::dii_threshold;
    double tau = 0.01;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    GridSpec grid() const;
};

struct Scenario {
    BinaryMask before;
    BinaryMask after;
    ChangeMask truth_change;
    ImpactMap truth_impact;
};

Scenario generate_scenario(const ScenarioConfig& config);

}  // namespace diimap
