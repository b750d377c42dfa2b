#include "diimap/kernels.hpp"

#include <atomic>

#include "kernels_isa.hpp"

namespace diimap::kernels {

namespace scalar {

void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<std::uint8_t>(a[i] & ~b[i]);
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] ? 1 : 0;
}

std::uint64_t count_ones(const std::uint8_t* p, std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += p[i];
    return sum;
}

ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n) {
    ConfusionTally t;
    for (std::size_t i = 0; i < n; ++i) {
        t.tp += pred[i] & truth[i];
        t.fp += pred[i] & ~truth[i] & 1u;
        t.fn += ~pred[i] & truth[i] & 1u;
    }
    t.tn = n - t.tp - t.fp - t.fn;
    return t;
}

}  // namespace scalar

namespace {

struct Ops {
    Backend backend;
    void (*and_not)(std::uint8_t*, const std::uint8_t*, const std::uint8_t*, std::size_t);
    void (*or_into)(std::uint8_t*, const std::uint8_t*, std::size_t);
    void (*binarize)(std::uint8_t*, const std::uint8_t*, std::size_t);
    std::uint64_t (*count_ones)(const std::uint8_t*, std::size_t);
    ConfusionTally (*confusion)(const std::uint8_t*, const std::uint8_t*, std::size_t);
};

constexpr Ops kScalarOps = {Backend::scalar, scalar::and_not,    scalar::or_into,
                            scalar::binarize, scalar::count_ones, scalar::confusion};

#if defined(DIIMAP_HAVE_AVX2)
constexpr Ops kAvx2Ops = {Backend::avx2,  avx2::and_not,    avx2::or_into,
                          avx2::binarize, avx2::count_ones, avx2::confusion};
#endif

#if defined(DIIMAP_HAVE_NEON)
constexpr Ops kNeonOps = {Backend::neon,  neon::and_not,    neon::or_into,
                          neon::binarize, neon::count_ones, neon::confusion};
#endif

const Ops* table_for(Backend b) {
    switch (b) {
        case Backend::scalar: return &kScalarOps;
#if defined(DIIMAP_HAVE_AVX2)
        case Backend::avx2: return &kAvx2Ops;
#endif
#if defined(DIIMAP_HAVE_NEON)
        case Backend::neon: return &kNeonOps;
#endif
        default: return nullptr;
    }
}

bool cpu_supports(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
#if defined(DIIMAP_HAVE_AVX2)
        case Backend::avx2: return __builtin_cpu_supports("avx2") != 0;
#endif
#if defined(DIIMAP_HAVE_NEON)
        case Backend::neon: return true;  // mandatory on aarch64
#endif
        default: return false;
    }
}

const Ops* detect_ops() {
#if defined(DIIMAP_HAVE_AVX2)
    if (cpu_supports(Backend::avx2)) return &kAvx2Ops;
#endif
#if defined(DIIMAP_HAVE_NEON)
    return &kNeonOps;
#endif
    return &kScalarOps;
}

std::atomic<const Ops*>& active_ops_slot() {
    static std::atomic<const Ops*> slot{detect_ops()};
    return slot;
}

const Ops& active_ops() { return *active_ops_slot().load(std::memory_order_relaxed); }

}  // namespace

void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    active_ops().and_not(dst, a, b, n);
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    active_ops().or_into(dst, src, n);
}

void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    active_ops().binarize(dst, src, n);
}

std::uint64_t count_ones(const std::uint8_t* p, std::size_t n) {
    return active_ops().count_ones(p, n);
}

ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n) {
    return active_ops().confusion(pred, truth, n);
}

Backend active_backend() { return active_ops().backend; }

bool backend_supported(Backend b) { return table_for(b) != nullptr && cpu_supports(b); }

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    active_ops_slot().store(table_for(b), std::memory_order_relaxed);
    return true;
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

}  // namespace diimap::kernels
