#include "quadclass/divisor_scan.hpp"

#include <cstdlib>
#include <cstring>

namespace quadclass::kernels {

namespace {

struct Selection {
    divisor_scan_fn fn;
    const char* name;
};

Selection select() {
    const char* env = std::getenv("QUADCLASS_NO_SIMD");
    if (env != nullptr && std::strcmp(env, "0") != 0) return {divisor_scan_scalar, "scalar"};
#if defined(QUADCLASS_HAVE_AVX2_TU)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return {divisor_scan_avx2, "avx2"};
#endif
#if defined(QUADCLASS_HAVE_NEON_TU)
    return {divisor_scan_neon, "neon"};
#endif
    return {divisor_scan_scalar, "scalar"};
}

const Selection& cached() {
    static const Selection s = select();
    return s;
}

}  // namespace

divisor_scan_fn active_divisor_scan() { return cached().fn; }

const char* active_divisor_scan_name() { return cached().name; }

}  // namespace quadclass::kernels
