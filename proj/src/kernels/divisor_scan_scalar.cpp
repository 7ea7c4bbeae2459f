#include "quadclass/divisor_scan.hpp"

namespace quadclass::kernels {

void divisor_scan_scalar(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                         std::vector<std::uint64_t>& out) {
    if (lo < 1) lo = 1;
    if (hi > m) hi = m;
    for (std::uint64_t a = lo; a <= hi; ++a) {
        if (m % a == 0) out.push_back(a);
    }
}

}  // namespace quadclass::kernels
