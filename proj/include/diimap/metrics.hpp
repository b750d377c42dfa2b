#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "diimap/change.hpp"
#include "diimap/impact.hpp"
#include "diimap/kernels.hpp"

// Precision / recall / F1 / IoU over pixels or grid cells. All tallies are
// exact integers; only the final ratios are floating point. Precision and
// recall are single divisions over the counts; F1 is the harmonic mean of the
// reported pair and IoU is f1/(2-f1), so those two identities hold exactly on
// every report. Zero-denominator convention: when nothing is predicted and
// nothing is true all four metrics are 1; when exactly one denominator is
// zero the corresponding metric is 0.

namespace diimap {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct EvalReport {
    std::string setting;  // "pixel" or "grid"
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    ConfusionCounts counts;
};

/// Elementwise tally; throws DimensionMismatch on length disagreement.
ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth,
                          int threads = 1);

EvalReport report_from_counts(const ConfusionCounts& counts, std::string setting);

/// Pixelwise comparison of two change masks of equal dimensions.
EvalReport eval_pixelwise(const ChangeMask& pred, const ChangeMask& truth, int threads = 1);

/// Cellwise comparison of two impact maps over the identical GridSpec.
EvalReport eval_gridded(const ImpactMap& pred, const ImpactMap& truth);

}  // namespace diimap
