// AVX2 kernel variants. This translation unit is compiled with -mavx2; it is
// only reached through the dispatch table after a runtime cpuid check.

#include "kernels_isa.hpp"

#if defined(DIIMAP_HAVE_AVX2)

#include <immintrin.h>

namespace diimap::kernels::avx2 {

namespace {

inline std::uint64_t hsum_epi64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        // andnot computes ~first & second
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_andnot_si256(vb, va));
    }
    scalar::and_not(dst + i, a + i, b + i, n - i);
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i vd = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i vs = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(vd, vs));
    }
    scalar::or_into(dst + i, src + i, n - i);
}

void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    const __m256i one = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        // min(v, 1) maps 0 -> 0 and any nonzero byte -> 1
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_min_epu8(v, one));
    }
    scalar::binarize(dst + i, src + i, n - i);
}

std::uint64_t count_ones(const std::uint8_t* p, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        // sad against zero sums the 0/1 bytes of each 8-byte group into a u64 lane
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(v, zero));
    }
    return hsum_epi64(acc) + scalar::count_ones(p + i, n - i);
}

ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc_tp = _mm256_setzero_si256();
    __m256i acc_fp = _mm256_setzero_si256();
    __m256i acc_fn = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i vp = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i));
        __m256i vt = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(truth + i));
        acc_tp = _mm256_add_epi64(acc_tp, _mm256_sad_epu8(_mm256_and_si256(vp, vt), zero));
        acc_fp = _mm256_add_epi64(acc_fp, _mm256_sad_epu8(_mm256_andnot_si256(vt, vp), zero));
        acc_fn = _mm256_add_epi64(acc_fn, _mm256_sad_epu8(_mm256_andnot_si256(vp, vt), zero));
    }
    ConfusionTally tail = scalar::confusion(pred + i, truth + i, n - i);
    ConfusionTally t;
    t.tp = hsum_epi64(acc_tp) + tail.tp;
    t.fp = hsum_epi64(acc_fp) + tail.fp;
    t.fn = hsum_epi64(acc_fn) + tail.fn;
    t.tn = n - t.tp - t.fp - t.fn;
    return t;
}

}  // namespace diimap::kernels::avx2

#endif  // DIIMAP_HAVE_AVX2
