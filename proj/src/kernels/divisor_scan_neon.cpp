#include <arm_neon.h>

#include "quadclass/divisor_scan.hpp"

namespace quadclass::kernels {

// Two lanes of double-precision trial division; same exactness argument as
// the AVX2 variant (m < 2^52, FMA remainder, two-sided adjust).
void divisor_scan_neon(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::uint64_t>& out) {
    if (lo < 1) lo = 1;
    if (hi > m) hi = m;
    if (lo > hi) return;
    if (m >= (1ull << 52) || hi - lo + 1 < 4) {
        divisor_scan_scalar(m, lo, hi, out);
        return;
    }

    const float64x2_t md = vdupq_n_f64(static_cast<double>(m));
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t zero = vdupq_n_f64(0.0);
    double lanes[2] = {static_cast<double>(lo), static_cast<double>(lo + 1)};
    float64x2_t a = vld1q_f64(lanes);

    std::uint64_t idx = lo;
    const std::uint64_t vec_end = lo + ((hi - lo + 1) / 2) * 2;
    for (; idx < vec_end; idx += 2) {
        float64x2_t q = vrndmq_f64(vdivq_f64(md, a));
        float64x2_t r = vfmsq_f64(md, q, a);
        uint64x2_t neg = vcltq_f64(r, zero);
        r = vaddq_f64(r, vreinterpretq_f64_u64(vandq_u64(neg, vreinterpretq_u64_f64(a))));
        uint64x2_t ge = vcgeq_f64(r, a);
        r = vsubq_f64(r, vreinterpretq_f64_u64(vandq_u64(ge, vreinterpretq_u64_f64(a))));
        uint64x2_t z = vceqq_f64(r, zero);
        if (vgetq_lane_u64(z, 0)) out.push_back(idx);
        if (vgetq_lane_u64(z, 1)) out.push_back(idx + 1);
        a = vaddq_f64(a, two);
    }
    for (; idx <= hi; ++idx) {
        if (m % idx == 0) out.push_back(idx);
    }
}

}  // namespace quadclass::kernels
