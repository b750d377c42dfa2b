#pragma once

#include <cstdint>
#include <vector>

#include "diimap/raster.hpp"

// Binary morphology used to denoise change masks: dilation by a Euclidean
// disk and removal of small connected components. Pixels outside the raster
// are background; there is no wraparound.

namespace diimap {

struct ComponentMap {
    int width = 0;
    int height = 0;
    // Per-pixel component id, 0 = background. Ids are contiguous positive
    // integers in first-encounter raster order.
    std::vector<std::int32_t> labels;
    // sizes[id] = pixel count of that component; sizes[0] = 0.
    std::vector<std::uint32_t> sizes;

    int component_count() const { return static_cast<int>(sizes.size()) - 1; }
};

// Dilation by the disk {(dx,dy) : dx^2 + dy^2 <= radius^2}; radius 0 is the
// identity. Output is bit-identical for any thread count.
BinaryMask dilate(const BinaryMask& mask, int radius, int threads = 1);

/// Connected components under 4- or 8-adjacency (two-pass union-find).
ComponentMap label_components(const BinaryMask& mask, int connectivity);

// Drops every component whose pixel count is strictly less than min_size,
// so a component of exactly min_size pixels survives.
BinaryMask remove_small_components(const BinaryMask& mask, std::uint32_t min_size,
                                   int connectivity);

}  // namespace diimap
