#include "diimap/impact.hpp"

#include <algorithm>
#include <string>

#include "diimap/error.hpp"
#include "diimap/kernels.hpp"
#include "diimap/parallel.hpp"

namespace diimap {

GridSpec::CellRect GridSpec::cell_rect(int row, int col) const {
    CellRect r;
    r.x0 = col * cell_size;
    r.y0 = row * cell_size;
    r.x1 = std::min(r.x0 + cell_size, width);
    r.y1 = std::min(r.y0 + cell_size, height);
    return r;
}

bool GridSpec::is_partial(int row, int col) const {
    const CellRect r = cell_rect(row, col);
    return (r.x1 - r.x0) != cell_size || (r.y1 - r.y0) != cell_size;
}

GridSpec make_grid(int width, int height, int cell_size) {
    if (cell_size < 1) {
        throw ConfigError("grid cell size must be >= 1, got " + std::to_string(cell_size));
    }
    if (width < 1 || height < 1) {
        throw ConfigError("grid extent must be >= 1x1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    GridSpec spec;
    spec.cell_size = cell_size;
    spec.width = width;
    spec.height = height;
    spec.cols = (width + cell_size - 1) / cell_size;
    spec.rows = (height + cell_size - 1) / cell_size;
    return spec;
}

namespace {

void check_shape(const BinaryMask& mask, const GridSpec& spec, const char* what) {
    if (mask.width() != spec.width || mask.height() != spec.height) {
        throw DimensionMismatch(std::string(what) + " mask is " + std::to_string(mask.width()) +
                                "x" + std::to_string(mask.height()) + " but the grid covers " +
                                std::to_string(spec.width) + "x" + std::to_string(spec.height));
    }
}

// Per-cell true-pixel counts; cell rows are independent, so the row loop can
// be chunked across threads with each chunk writing its own slice.
std::vector<std::uint64_t> cell_counts(const BinaryMask& mask, const GridSpec& spec,
                                       int threads) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(spec.cell_count()), 0);
    parallel_chunks(static_cast<std::size_t>(spec.rows), threads,
                    [&](std::size_t r0, std::size_t r1) {
                        for (std::size_t r = r0; r < r1; ++r) {
                            for (int c = 0; c < spec.cols; ++c) {
                                const GridSpec::CellRect rect =
                                    spec.cell_rect(static_cast<int>(r), c);
                                std::uint64_t n = 0;
                                for (int y = rect.y0; y < rect.y1; ++y) {
                                    n += kernels::count_ones(mask.row(y) + rect.x0,
                                                             static_cast<std::size_t>(rect.x1 - rect.x0));
                                }
                                counts[r * static_cast<std::size_t>(spec.cols) +
                                       static_cast<std::size_t>(c)] = n;
                            }
                        }
                    });
    return counts;
}

}  // namespace

DiiGrid compute_dii(const ChangeMask& change, const BinaryMask& before, const GridSpec& spec,
                    int threads) {
    check_shape(change, spec, "change");
    check_shape(before, spec, "before");

    DiiGrid grid;
    grid.spec = spec;
    grid.change_count = cell_counts(change, spec, threads);
    grid.before_count = cell_counts(before, spec, threads);

    grid.before_total = 0;
    for (std::uint64_t n : grid.before_count) grid.before_total += n;
    if (grid.before_total == 0) {
        throw EmptyReference("before mask has no feature pixels; the region mean is undefined");
    }

    const auto cells = static_cast<std::uint64_t>(spec.cell_count());
    grid.region_mean = static_cast<double>(grid.before_total) / static_cast<double>(cells);

    // Evaluated as (count * cells) / before_total: one rounding instead of
    // two, which keeps the ratio exactly invariant under pixel duplication.
    grid.dii.resize(grid.change_count.size());
    for (std::size_t i = 0; i < grid.dii.size(); ++i) {
        grid.dii[i] = static_cast<double>(grid.change_count[i] * cells) /
                      static_cast<double>(grid.before_total);
    }
    return grid;
}

std::uint64_t ImpactMap::impacted_count() const {
    return kernels::count_ones(impacted.data(), impacted.size());
}

ImpactMap threshold_dii(const DiiGrid& grid, double tau) {
    if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0, got " + std::to_string(tau));
    ImpactMap map;
    map.spec = grid.spec;
    map.tau = tau;
    map.impacted.resize(grid.dii.size());
    for (std::size_t i = 0; i < grid.dii.size(); ++i) {
        map.impacted[i] = grid.dii[i] >= tau ? 1 : 0;
    }
    return map;
}

std::string_view to_string(TruthRule r) {
    return r == TruthRule::dii_threshold ? "dii-threshold" : "any-pixel";
}

TruthRule truth_rule_from_string(std::string_view s) {
    if (s == "dii-threshold") return TruthRule::dii_threshold;
    if (s == "any-pixel") return TruthRule::any_pixel;
    throw ConfigError("truth rule must be dii-threshold or any-pixel, got \"" + std::string(s) +
                      "\"");
}

ImpactMap grid_truth(const ChangeMask& label_change, const BinaryMask& before_labels,
                     const GridSpec& spec, TruthRule rule, double tau, int threads) {
    if (rule == TruthRule::dii_threshold) {
        return threshold_dii(compute_dii(label_change, before_labels, spec, threads), tau);
    }
    check_shape(label_change, spec, "label change");
    ImpactMap map;
    map.spec = spec;
    map.tau = tau;
    const std::vector<std::uint64_t> counts = cell_counts(label_change, spec, threads);
    map.impacted.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) map.impacted[i] = counts[i] > 0 ? 1 : 0;
    return map;
}

}  // namespace diimap
