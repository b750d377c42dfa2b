// NEON kernel variants for aarch64 builds. NEON is mandatory on aarch64, so
// these are selected whenever the translation unit is compiled in.

#include "kernels_isa.hpp"

#if defined(DIIMAP_HAVE_NEON)

#include <arm_neon.h>

namespace diimap::kernels::neon {

void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        uint8x16_t va = vld1q_u8(a + i);
        uint8x16_t vb = vld1q_u8(b + i);
        vst1q_u8(dst + i, vbicq_u8(va, vb));  // a & ~b
    }
    scalar::and_not(dst + i, a + i, b + i, n - i);
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        vst1q_u8(dst + i, vorrq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
    }
    scalar::or_into(dst + i, src + i, n - i);
}

void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    const uint8x16_t one = vdupq_n_u8(1);
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        vst1q_u8(dst + i, vminq_u8(vld1q_u8(src + i), one));
    }
    scalar::binarize(dst + i, src + i, n - i);
}

std::uint64_t count_ones(const std::uint8_t* p, std::size_t n) {
    std::uint64_t sum = 0;
    std::size_t i = 0;
    // Byte accumulator lanes hold at most 255 before widening.
    while (i + 16 <= n) {
        std::size_t blocks = (n - i) / 16;
        if (blocks > 255) blocks = 255;
        uint8x16_t acc = vdupq_n_u8(0);
        for (std::size_t b = 0; b < blocks; ++b, i += 16) {
            acc = vaddq_u8(acc, vld1q_u8(p + i));
        }
        sum += vaddlvq_u8(acc);
    }
    return sum + scalar::count_ones(p + i, n - i);
}

ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n) {
    ConfusionTally t;
    std::size_t i = 0;
    while (i + 16 <= n) {
        std::size_t blocks = (n - i) / 16;
        if (blocks > 255) blocks = 255;
        uint8x16_t acc_tp = vdupq_n_u8(0);
        uint8x16_t acc_fp = vdupq_n_u8(0);
        uint8x16_t acc_fn = vdupq_n_u8(0);
        for (std::size_t b = 0; b < blocks; ++b, i += 16) {
            uint8x16_t vp = vld1q_u8(pred + i);
            uint8x16_t vt = vld1q_u8(truth + i);
            acc_tp = vaddq_u8(acc_tp, vandq_u8(vp, vt));
            acc_fp = vaddq_u8(acc_fp, vbicq_u8(vp, vt));
            acc_fn = vaddq_u8(acc_fn, vbicq_u8(vt, vp));
        }
        t.tp += vaddlvq_u8(acc_tp);
        t.fp += vaddlvq_u8(acc_fp);
        t.fn += vaddlvq_u8(acc_fn);
    }
    ConfusionTally tail = scalar::confusion(pred + i, truth + i, n - i);
    t.tp += tail.tp;
    t.fp += tail.fp;
    t.fn += tail.fn;
    t.tn = n - t.tp - t.fp - t.fn;
    return t;
}

}  // namespace diimap::kernels::neon

#endif  // DIIMAP_HAVE_NEON
