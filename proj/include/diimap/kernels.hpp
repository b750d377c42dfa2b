#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Byte-lattice kernels behind the raster pipeline. Every buffer holds one
// byte per pixel with values strictly 0 or 1; ranges passed to a kernel must
// not alias. Each operation has a scalar reference implementation and, where
// the CPU supports it, a SIMD variant selected at runtime. All variants are
// bit-identical to the scalar reference (see tests/test_kernels.cpp).

namespace diimap::kernels {

enum class Backend { scalar, avx2, neon };

struct ConfusionTally {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
};

/// dst[i] = a[i] & ~b[i]
void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

/// dst[i] |= src[i]
void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);

/// dst[i] = src[i] != 0 ? 1 : 0 (src bytes may be arbitrary here)
void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);

/// Number of 1-bytes in p[0..n).
std::uint64_t count_ones(const std::uint8_t* p, std::size_t n);

/// Elementwise confusion tally of pred against truth.
ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n);

Backend active_backend();
bool backend_supported(Backend b);

/// Switch the dispatch table; returns false (and changes nothing) if the
/// backend is not supported on this CPU. Used by the equivalence tests.
bool set_backend(Backend b);

std::string_view backend_name(Backend b);

// Scalar reference implementations, always available. The dispatched entry
// points above must agree with these bit for bit on every input.
namespace scalar {
void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
std::uint64_t count_ones(const std::uint8_t* p, std::size_t n);
ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n);
}  // namespace scalar

}  // namespace diimap::kernels
