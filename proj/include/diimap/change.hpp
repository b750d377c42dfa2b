#pragma once

#include <string_view>

#include "diimap/morphology.hpp"
#include "diimap/raster.hpp"

// Directional change extraction: pixels carrying a feature before the event
// and not after it. One of the two masks may be dilated first to absorb
// registration jitter, and the raw difference is denoised by dropping small
// connected components.

namespace diimap {

enum class DilateTarget { pre, post, none };

std::string_view to_string(DilateTarget t);
DilateTarget dilate_target_from_string(std::string_view s);

struct PipelineConfig {
    int dilation_radius = 5;
    DilateTarget dilate_target = DilateTarget::pre;
    std::uint32_t min_component = 1000;
    int connectivity = 8;

    void validate() const;
};

// True = feature lost across the disaster. Same lattice conventions as
// BinaryMask.
using ChangeMask = BinaryMask;

struct ChangeResult {
    ChangeMask mask;
    PipelineConfig applied;
};

// dilate_target=pre:  change = dilate(before, r) & ~after
// dilate_target=post: change = before & ~dilate(after, r)
// dilate_target=none: change = before & ~after
// followed by remove_small_components(change, min_component, connectivity).
ChangeResult compute_change_mask(const RasterPair& pair, const PipelineConfig& config,
                                 int threads = 1);

}  // namespace diimap
