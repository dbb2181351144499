#include "tapo/lane_kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tapo::simd {

namespace {

void fill(Word* dst, std::size_t n, Word value) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = value;
}

void copy(Word* dst, const Word* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i];
}

void bit_and(Word* dst, const Word* a, const Word* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i] & b[i];
}

void bit_or(Word* dst, const Word* a, const Word* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i] | b[i];
}

void bit_not(Word* dst, const Word* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = ~a[i];
}

void or_into(Word* dst, const Word* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] |= a[i];
}

void and_into(Word* dst, const Word* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] &= a[i];
}

void implies_into(Word* dst, const Word* a, const Word* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] &= ~a[i] | b[i];
}

bool any(const Word* a, std::size_t n) {
    Word acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        acc |= a[i];
    return acc != 0;
}

} // namespace

const LaneKernels& scalar_kernels() noexcept {
    static const LaneKernels k{"scalar", fill,    copy,     bit_and,      bit_or,
                               bit_not,  or_into, and_into, implies_into, any};
    return k;
}

#if !defined(TAPO_HAVE_AVX2)
const LaneKernels* avx2_kernels() noexcept { return nullptr; }
#endif

const LaneKernels& active_kernels() noexcept {
    static const LaneKernels* chosen = [] {
        const char* force = std::getenv("TAPO_KERNELS");
        if (force != nullptr && std::strcmp(force, "scalar") == 0)
            return &scalar_kernels();
        if (const LaneKernels* k = avx2_kernels())
            return k;
        return &scalar_kernels();
    }();
    return *chosen;
}

} // namespace tapo::simd
