#include "diimap/change.hpp"

#include <string>

#include "diimap/error.hpp"
#include "diimap/kernels.hpp"
#include "diimap/parallel.hpp"

namespace diimap {

std::string_view to_string(DilateTarget t) {
    switch (t) {
        case DilateTarget::pre: return "pre";
        case DilateTarget::post: return "post";
        case DilateTarget::none: return "none";
    }
    return "unknown";
}

DilateTarget dilate_target_from_string(std::string_view s) {
    if (s == "pre") return DilateTarget::pre;
    if (s == "post") return DilateTarget::post;
    if (s == "none") return DilateTarget::none;
    throw ConfigError("dilate_target must be pre, post or none, got \"" + std::string(s) + "\"");
}

void PipelineConfig::validate() const {
    if (dilation_radius < 0) {
        throw ConfigError("dilation_radius must be >= 0, got " + std::to_string(dilation_radius));
    }
    if (connectivity != 4 && connectivity != 8) {
        throw ConfigError("connectivity must be 4 or 8, got " + std::to_string(connectivity));
    }
}

ChangeResult compute_change_mask(const RasterPair& pair, const PipelineConfig& config,
                                 int threads) {
    config.validate();

    const BinaryMask* before = &pair.before;
    const BinaryMask* after = &pair.after;
    BinaryMask dilated(1, 1);
    if (config.dilation_radius > 0 && config.dilate_target != DilateTarget::none) {
        if (config.dilate_target == DilateTarget::pre) {
            dilated = dilate(pair.before, config.dilation_radius, threads);
            before = &dilated;
        } else {
            dilated = dilate(pair.after, config.dilation_radius, threads);
            after = &dilated;
        }
    }

    ChangeMask raw(pair.before.width(), pair.before.height());
    const std::uint8_t* a = before->data();
    const std::uint8_t* b = after->data();
    std::uint8_t* dst = raw.data();
    parallel_chunks(raw.size(), threads, [&](std::size_t lo, std::size_t hi) {
        kernels::and_not(dst + lo, a + lo, b + lo, hi - lo);
    });

    return ChangeResult{remove_small_components(raw, config.min_component, config.connectivity),
                        config};
}

}  // namespace diimap
