#pragma once

// Internal declarations for the ISA-specific kernel translation units.
// kernels_avx2.cpp is compiled with -mavx2 on x86_64 builds; kernels_neon.cpp
// is compiled on aarch64 builds. Dispatch in kernels.cpp only routes to a
// variant after the matching runtime CPU check.

#include "diimap/kernels.hpp"

namespace diimap::kernels {

#if defined(DIIMAP_HAVE_AVX2)
namespace avx2 {
void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
std::uint64_t count_ones(const std::uint8_t* p, std::size_t n);
ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n);
}  // namespace avx2
#endif

#if defined(DIIMAP_HAVE_NEON)
namespace neon {
void and_not(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void binarize(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
std::uint64_t count_ones(const std::uint8_t* p, std::size_t n);
ConfusionTally confusion(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n);
}  // namespace neon
#endif

}  // namespace diimap::kernels
