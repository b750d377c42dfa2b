#include "diimap/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diimap/error.hpp"
#include "diimap/kernels.hpp"
#include "diimap/parallel.hpp"

namespace diimap {

namespace {

void check_connectivity(int connectivity) {
    if (connectivity != 4 && connectivity != 8) {
        throw ConfigError("connectivity must be 4 or 8, got " + std::to_string(connectivity));
    }
}

// Largest |dx| with dx^2 + dy^2 <= r^2, computed in integers.
int disk_halfwidth(int radius, int dy) {
    const long long rem = 1LL * radius * radius - 1LL * dy * dy;
    int hw = static_cast<int>(std::sqrt(static_cast<double>(rem)));
    while (1LL * hw * hw > rem) --hw;
    while (1LL * (hw + 1) * (hw + 1) <= rem) ++hw;
    return hw;
}

// out[x] = OR of src[x-k .. x+k] clipped to the row.
void dilate_row(std::uint8_t* out, const std::uint8_t* src, int width, int k) {
    std::copy(src, src + width, out);
    for (int d = 1; d <= k; ++d) {
        const std::size_t len = static_cast<std::size_t>(width - d);
        if (width <= d) break;
        kernels::or_into(out + d, src, len);  // shift right: out[x] |= src[x-d]
        kernels::or_into(out, src + d, len);  // shift left:  out[x] |= src[x+d]
    }
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius, int threads) {
    if (radius < 0) throw ConfigError("dilation radius must be >= 0, got " + std::to_string(radius));
    if (radius == 0) return mask;

    const int width = mask.width();
    const int height = mask.height();
    const std::size_t row_bytes = static_cast<std::size_t>(width);

    // Per-row halfwidths of the disk, shared between |dy| and -|dy|.
    std::vector<int> halfwidth(static_cast<std::size_t>(radius) + 1);
    for (int dy = 0; dy <= radius; ++dy) halfwidth[static_cast<std::size_t>(dy)] = disk_halfwidth(radius, dy);

    // Phase 1: horizontally dilate every input row once per distinct halfwidth.
    std::vector<int> distinct = halfwidth;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> variant_of(halfwidth.size());
    std::vector<std::vector<std::uint8_t>> hdil(distinct.size());
    for (std::size_t v = 0; v < distinct.size(); ++v) {
        hdil[v].resize(row_bytes * static_cast<std::size_t>(height));
    }
    for (std::size_t dy = 0; dy < halfwidth.size(); ++dy) {
        variant_of[dy] = static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(), halfwidth[dy]) - distinct.begin());
    }

    parallel_chunks(static_cast<std::size_t>(height), threads, [&](std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t v = 0; v < distinct.size(); ++v) {
                dilate_row(hdil[v].data() + y * row_bytes, mask.row(static_cast<int>(y)), width,
                           distinct[v]);
            }
        }
    });

    // Phase 2: each output row gathers the horizontally dilated neighbor rows.
    BinaryMask out(width, height);
    parallel_chunks(static_cast<std::size_t>(height), threads, [&](std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < y1; ++y) {
            std::uint8_t* dst = out.row(static_cast<int>(y));
            const int iy = static_cast<int>(y);
            for (int dy = -radius; dy <= radius; ++dy) {
                const int sy = iy + dy;
                if (sy < 0 || sy >= height) continue;
                const int v = variant_of[static_cast<std::size_t>(std::abs(dy))];
                kernels::or_into(dst, hdil[static_cast<std::size_t>(v)].data() +
                                          static_cast<std::size_t>(sy) * row_bytes,
                                 row_bytes);
            }
        }
    });
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return static_cast<std::int32_t>(parent.size()) - 1;
    }
    std::int32_t find(std::int32_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[static_cast<std::size_t>(b)] = a;
        else parent[static_cast<std::size_t>(a)] = b;
    }
};

}  // namespace

ComponentMap label_components(const BinaryMask& mask, int connectivity) {
    check_connectivity(connectivity);
    const int width = mask.width();
    const int height = mask.height();

    ComponentMap map;
    map.width = width;
    map.height = height;
    map.labels.assign(mask.size(), 0);

    // Pass 1: provisional labels from already-scanned neighbors (W, NW, N, NE).
    UnionFind uf;
    uf.make();  // slot 0 = background
    std::vector<std::int32_t> provisional(mask.size(), 0);
    const bool diag = connectivity == 8;

    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = mask.row(y);
        for (int x = 0; x < width; ++x) {
            if (!row[x]) continue;
            const std::size_t idx =
                static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x);
            std::int32_t neighbor = 0;
            auto consider = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
                const std::int32_t lab =
                    provisional[static_cast<std::size_t>(ny) * static_cast<std::size_t>(width) +
                                static_cast<std::size_t>(nx)];
                if (lab == 0) return;
                if (neighbor == 0) neighbor = lab;
                else uf.unite(neighbor, lab);
            };
            consider(x - 1, y);
            consider(x, y - 1);
            if (diag) {
                consider(x - 1, y - 1);
                consider(x + 1, y - 1);
            }
            provisional[idx] = neighbor != 0 ? neighbor : uf.make();
        }
    }

    // Pass 2: map union-find roots to contiguous ids in first-encounter order.
    std::vector<std::int32_t> root_to_final(uf.parent.size(), 0);
    std::int32_t next = 0;
    std::vector<std::uint32_t> sizes(1, 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (provisional[i] == 0) continue;
        const std::int32_t root = uf.find(provisional[i]);
        std::int32_t final_label = root_to_final[static_cast<std::size_t>(root)];
        if (final_label == 0) {
            final_label = ++next;
            root_to_final[static_cast<std::size_t>(root)] = final_label;
            sizes.push_back(0);
        }
        map.labels[i] = final_label;
        ++sizes[static_cast<std::size_t>(final_label)];
    }
    map.sizes = std::move(sizes);
    return map;
}

BinaryMask remove_small_components(const BinaryMask& mask, std::uint32_t min_size,
                                   int connectivity) {
    check_connectivity(connectivity);
    if (min_size <= 1) return mask;  // every component has at least 1 pixel

    const ComponentMap map = label_components(mask, connectivity);
    std::vector<std::uint8_t> keep(map.sizes.size(), 0);
    for (std::size_t id = 1; id < map.sizes.size(); ++id) {
        keep[id] = map.sizes[id] >= min_size ? 1 : 0;
    }
    BinaryMask out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (map.labels[i] != 0 && keep[static_cast<std::size_t>(map.labels[i])]) {
            out.data()[i] = 1;
        }
    }
    return out;
}

}  // namespace diimap
