// Compiled with -mavx2; only reached after a runtime CPU check.

#include "tapo/lane_kernels.hpp"

#include <immintrin.h>

namespace tapo::simd {

namespace {

constexpr std::size_t kStep = 4; // words per __m256i

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

void fill(Word* dst, std::size_t n, Word value) {
    const __m256i v = _mm256_set1_epi64x(static_cast<long long>(value));
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, v);
    for (; i < n; ++i)
        dst[i] = value;
}

void copy(Word* dst, const Word* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, load(a + i));
    for (; i < n; ++i)
        dst[i] = a[i];
}

void bit_and(Word* dst, const Word* a, const Word* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, _mm256_and_si256(load(a + i), load(b + i)));
    for (; i < n; ++i)
        dst[i] = a[i] & b[i];
}

void bit_or(Word* dst, const Word* a, const Word* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, _mm256_or_si256(load(a + i), load(b + i)));
    for (; i < n; ++i)
        dst[i] = a[i] | b[i];
}

void bit_not(Word* dst, const Word* a, std::size_t n) {
    const __m256i ones = _mm256_set1_epi64x(-1);
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, _mm256_xor_si256(load(a + i), ones));
    for (; i < n; ++i)
        dst[i] = ~a[i];
}

void or_into(Word* dst, const Word* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, _mm256_or_si256(load(dst + i), load(a + i)));
    for (; i < n; ++i)
        dst[i] |= a[i];
}

void and_into(Word* dst, const Word* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        store(dst + i, _mm256_and_si256(load(dst + i), load(a + i)));
    for (; i < n; ++i)
        dst[i] &= a[i];
}

void implies_into(Word* dst, const Word* a, const Word* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep) {
        // a & ~b marks the violating lanes; clear them.
        __m256i bad = _mm256_andnot_si256(load(b + i), load(a + i));
        store(dst + i, _mm256_andnot_si256(bad, load(dst + i)));
    }
    for (; i < n; ++i)
        dst[i] &= ~a[i] | b[i];
}

bool any(const Word* a, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep)
        acc = _mm256_or_si256(acc, load(a + i));
    Word tail = 0;
    for (; i < n; ++i)
        tail |= a[i];
    return tail != 0 || !_mm256_testz_si256(acc, acc);
}

} // namespace

const LaneKernels* avx2_kernels() noexcept {
    static const LaneKernels k{"avx2",  fill,    copy,     bit_and,      bit_or,
                               bit_not, or_into, and_into, implies_into, any};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &k : nullptr;
}

} // namespace tapo::simd
