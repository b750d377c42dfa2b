#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "diimap/change.hpp"
#include "diimap/raster.hpp"

// Grid aggregation of a change mask into the Disaster Impact Index (DII).
// Each cell's index is its change-pixel count divided by the region-wide mean
// of per-cell before-feature counts, so the value is dimensionless and
// comparable across regions and feature types. Cells meeting the threshold
// tau (inclusive) are declared impacted.

namespace diimap {

struct GridSpec {
    int cell_size = 256;
    int width = 0;   // image width in pixels
    int height = 0;  // image height in pixels
    int cols = 0;
    int rows = 0;

    int cell_count() const { return rows * cols; }

    struct CellRect {  // half-open pixel rectangle
        int x0, y0, x1, y1;
    };
    CellRect cell_rect(int row, int col) const;
    bool is_partial(int row, int col) const;
    bool has_partial_cells() const { return width % cell_size != 0 || height % cell_size != 0; }

    bool operator==(const GridSpec&) const = default;
};

// Ceiling-division grid; the rightmost column and bottom row may be partial
// and participate like any other cell. Throws ConfigError when cell_size < 1.
GridSpec make_grid(int width, int height, int cell_size);

struct DiiGrid {
    GridSpec spec;
    std::vector<std::uint64_t> change_count;  // row-major cells
    std::vector<std::uint64_t> before_count;
    std::uint64_t before_total = 0;
    double region_mean = 0.0;  // before_total / cell_count
    std::vector<double> dii;   // change_count[c] / region_mean
};

// Counts change and before pixels per cell and derives the index. Throws
// EmptyReference when the before mask has no feature pixel anywhere (the
// denominator would be undefined), DimensionMismatch when shapes disagree.
DiiGrid compute_dii(const ChangeMask& change, const BinaryMask& before, const GridSpec& spec,
                    int threads = 1);

struct ImpactMap {
    GridSpec spec;
    std::vector<std::uint8_t> impacted;  // row-major cells, 0/1
    double tau = 0.0;

    std::uint64_t impacted_count() const;
    bool operator==(const ImpactMap&) const = default;
};

/// impacted[c] <=> dii[c] >= tau. Throws ConfigError when tau < 0.
ImpactMap threshold_dii(const DiiGrid& grid, double tau);

enum class TruthRule { dii_threshold, any_pixel };

std::string_view to_string(TruthRule r);
TruthRule truth_rule_from_string(std::string_view s);

// Grids ground-truth labels into an impact map. dii_threshold runs the label
// masks through compute_dii + threshold_dii with the same tau; any_pixel
// marks a cell as impacted when it contains at least one labeled change pixel.
ImpactMap grid_truth(const ChangeMask& label_change, const BinaryMask& before_labels,
                     const GridSpec& spec, TruthRule rule, double tau, int threads = 1);

}  // namespace diimap
