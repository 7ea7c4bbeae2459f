#include <immintrin.h>

#include "quadclass/divisor_scan.hpp"

namespace quadclass::kernels {

// Four divisor candidates per iteration. Let q* = floor(m/a). The rounded
// double quotient q = floor(fl(m/a)) lands in {q*-1, q*, q*+1} because
// m < 2^52 keeps the relative division error below one half unit. The FMA
// r = m - q*a is then exact (|r| < 2a < 2^53), and one conditional add plus
// one conditional subtract restore r = m mod a exactly.
void divisor_scan_avx2(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::uint64_t>& out) {
    if (lo < 1) lo = 1;
    if (hi > m) hi = m;
    if (lo > hi) return;
    if (m >= (1ull << 52) || hi - lo + 1 < 8) {
        divisor_scan_scalar(m, lo, hi, out);
        return;
    }

    const __m256d md = _mm256_set1_pd(static_cast<double>(m));
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d zero = _mm256_setzero_pd();
    __m256d a = _mm256_setr_pd(static_cast<double>(lo), static_cast<double>(lo + 1),
                               static_cast<double>(lo + 2), static_cast<double>(lo + 3));

    std::uint64_t idx = lo;
    const std::uint64_t vec_end = lo + ((hi - lo + 1) / 4) * 4;
    for (; idx < vec_end; idx += 4) {
        __m256d q = _mm256_floor_pd(_mm256_div_pd(md, a));
        __m256d r = _mm256_fnmadd_pd(q, a, md);
        __m256d neg = _mm256_cmp_pd(r, zero, _CMP_LT_OQ);
        r = _mm256_add_pd(r, _mm256_and_pd(neg, a));
        __m256d ge = _mm256_cmp_pd(r, a, _CMP_GE_OQ);
        r = _mm256_sub_pd(r, _mm256_and_pd(ge, a));
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(r, zero, _CMP_EQ_OQ));
        while (mask) {
            int lane = __builtin_ctz(static_cast<unsigned>(mask));
            out.push_back(idx + static_cast<std::uint64_t>(lane));
            mask &= mask - 1;
        }
        a = _mm256_add_pd(a, four);
    }
    for (; idx <= hi; ++idx) {
        if (m % idx == 0) out.push_back(idx);
    }
}

}  // namespace quadclass::kernels
