#include "diimap/metrics.hpp"

#include <mutex>
#include <vector>

#include "diimap/error.hpp"
#include "diimap/parallel.hpp"

namespace diimap {

ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth,
                          int threads) {
    if (pred.size() != truth.size()) {
        throw DimensionMismatch("confusion inputs differ in length: " +
                                std::to_string(pred.size()) + " vs " +
                                std::to_string(truth.size()));
    }
    if (threads <= 1) {
        const kernels::ConfusionTally t = kernels::confusion(pred.data(), truth.data(), pred.size());
        return ConfusionCounts{t.tp, t.fp, t.fn, t.tn};
    }
    // Partition tallies are combined with integer addition, so the result is
    // independent of the partitioning.
    std::mutex mu;
    ConfusionCounts sum;
    parallel_chunks(pred.size(), threads, [&](std::size_t lo, std::size_t hi) {
        const kernels::ConfusionTally t =
            kernels::confusion(pred.data() + lo, truth.data() + lo, hi - lo);
        std::lock_guard<std::mutex> lock(mu);
        sum.tp += t.tp;
        sum.fp += t.fp;
        sum.fn += t.fn;
        sum.tn += t.tn;
    });
    return sum;
}

EvalReport report_from_counts(const ConfusionCounts& c, std::string setting) {
    EvalReport r;
    r.setting = std::move(setting);
    r.counts = c;

    const bool nothing_predicted = c.tp + c.fp == 0;
    const bool nothing_true = c.tp + c.fn == 0;
    if (nothing_predicted && nothing_true) {
        r.precision = r.recall = r.f1 = r.iou = 1.0;
        return r;
    }
    r.precision =
        nothing_predicted ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    r.recall = nothing_true ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    // F1 and IoU are evaluated from the reported precision and recall rather
    // than re-derived from the raw counts, so the published relations —
    // f1 = 2PR/(P+R) and iou = f1/(2-f1) — hold bit-for-bit on every report.
    // Deriving both independently from the counts leaves the identities off
    // by up to 2 ulp at unlucky count triples; this way the slack is zero and
    // each value still sits within a few ulp of its count ratio.
    const double pr = r.precision + r.recall;
    r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
    r.iou = r.f1 / (2.0 - r.f1);
    return r;
}

EvalReport eval_pixelwise(const ChangeMask& pred, const ChangeMask& truth, int threads) {
    if (!pred.same_shape(truth)) {
        throw DimensionMismatch("pixelwise evaluation needs equal dimensions, got " +
                                std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                                " vs " + std::to_string(truth.width()) + "x" +
                                std::to_string(truth.height()));
    }
    return report_from_counts(confusion(pred.pixels(), truth.pixels(), threads), "pixel");
}

EvalReport eval_gridded(const ImpactMap& pred, const ImpactMap& truth) {
    if (!(pred.spec == truth.spec)) {
        throw DimensionMismatch(
            "gridded evaluation needs identical grids, got cell_size " +
            std::to_string(pred.spec.cell_size) + " over " + std::to_string(pred.spec.width) +
            "x" + std::to_string(pred.spec.height) + " vs cell_size " +
            std::to_string(truth.spec.cell_size) + " over " + std::to_string(truth.spec.width) +
            "x" + std::to_string(truth.spec.height));
    }
    return report_from_counts(confusion(pred.impacted, truth.impacted), "grid");
}

}  // namespace diimap
