#pragma once

#include <cstdint>
#include <vector>

namespace quadclass::kernels {

// Appends every a in [max(lo,1), min(hi,m)] dividing m to out, ascending.
// Requires m >= 1. This is the inner loop of form enumeration: one window
// scan per (discriminant, b) pair.
using divisor_scan_fn = void (*)(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                                 std::vector<std::uint64_t>& out);

void divisor_scan_scalar(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                         std::vector<std::uint64_t>& out);

#if defined(QUADCLASS_HAVE_AVX2_TU)
// Vector lanes do the trial division in double precision with an exact
// FMA remainder; falls back to scalar when m does not fit in 52 bits.
void divisor_scan_avx2(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::uint64_t>& out);
#endif
#if defined(QUADCLASS_HAVE_NEON_TU)
void divisor_scan_neon(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::uint64_t>& out);
#endif

// Runtime-selected implementation. Honors QUADCLASS_NO_SIMD=1.
divisor_scan_fn active_divisor_scan();
const char* active_divisor_scan_name();

inline void divisor_scan(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                         std::vector<std::uint64_t>& out) {
    active_divisor_scan()(m, lo, hi, out);
}

}  // namespace quadclass::kernels
