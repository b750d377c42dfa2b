#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "diimap/impact.hpp"
#include "diimap/metrics.hpp"
#include "diimap/raster.hpp"

// Report emission: per-cell grid CSVs, metric summaries and GeoJSON impact
// polygons. All text output uses '.' as the decimal separator, no grouping
// separators and LF line endings regardless of platform, so files diff
// deterministically in tests.
//
// Grid CSVs are self-describing: the first line is a `#` metadata comment
// carrying cell_size, width, height and tau, followed by a header row and one
// data row per cell. read_grid_csv accepts any such file that has row, col
// and impacted columns, which covers both the DII table and the plain
// truth-impact table.

namespace diimap {

/// Shortest decimal string that round-trips the value ("0.5", not "0.500000").
std::string format_double(double v);

/// Fixed four-decimal rendering used for metric ratios ("0.6667").
std::string format_ratio(double v);

/// Per-cell table: row, col, change_count, before_count, dii, impacted.
void write_dii_csv(const std::filesystem::path& path, const DiiGrid& grid,
                   const ImpactMap& impact);

/// Per-cell table: row, col, impacted.
void write_impact_csv(const std::filesystem::path& path, const ImpactMap& impact);

/// Reads either grid CSV back into an impact map. Throws FormatError on
/// malformed content, missing cells or out-of-range indices.
ImpactMap read_grid_csv(const std::filesystem::path& path);

/// One row per report: setting, precision, recall, f1, iou, tp, fp, fn, tn.
std::string metrics_csv(const std::vector<EvalReport>& reports);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<EvalReport>& reports);

// GeoJSON FeatureCollection with one polygon feature per impacted cell.
// Coordinates are pixel corners, or map coordinates when a world transform is
// given; exterior rings follow the RFC 7946 counterclockwise convention in
// either frame. When the DII grid is supplied each feature carries its index
// value in the properties.
void write_impact_geojson(const std::filesystem::path& path, const ImpactMap& impact,
                          const DiiGrid* dii = nullptr,
                          const std::optional<WorldTransform>& world = std::nullopt);

}  // namespace diimap
