#pragma once

// Word-parallel boolean kernels used by the bit-sliced model evaluator. Each
// 64-bit word carries one candidate interpretation per bit, so a single
// AND/OR over a lane vector evaluates a connective for 64 (scalar) or 256
// (AVX2) interpretations at once.

#include <cstddef>
#include <cstdint>

namespace tapo::simd {

using Word = std::uint64_t;

struct LaneKernels {
    const char* name;
    void (*fill)(Word* dst, std::size_t n, Word value);
    void (*copy)(Word* dst, const Word* a, std::size_t n);
    void (*bit_and)(Word* dst, const Word* a, const Word* b, std::size_t n);
    void (*bit_or)(Word* dst, const Word* a, const Word* b, std::size_t n);
    void (*bit_not)(Word* dst, const Word* a, std::size_t n);
    void (*or_into)(Word* dst, const Word* a, std::size_t n);
    void (*and_into)(Word* dst, const Word* a, std::size_t n);
    /// dst &= ~a | b   (lane-wise implication a -> b, accumulated)
    void (*implies_into)(Word* dst, const Word* a, const Word* b, std::size_t n);
    bool (*any)(const Word* a, std::size_t n);
};

/// Portable reference implementation.
const LaneKernels& scalar_kernels() noexcept;

/// AVX2 implementation, or nullptr when not compiled in or not supported by
/// the running CPU.
const LaneKernels* avx2_kernels() noexcept;

/// Best available kernels. Setting TAPO_KERNELS=scalar in the environment
/// forces the reference path.
const LaneKernels& active_kernels() noexcept;

} // namespace tapo::simd
