#include "cyclosieve/kernels.hpp"

namespace cyclosieve::kernels {

#ifdef CYCLOSIEVE_AVX2_TU
const bool avx2_compiled = true;
#else
const bool avx2_compiled = false;

void powmod_batch_avx2(const u64*, std::size_t, u64, u64, u64*) {
    throw std::runtime_error("AVX2 kernel not compiled in");
}
#endif

bool avx2_supported() {
#ifdef CYCLOSIEVE_AVX2_TU
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

bool avx2_eligible(u64 m) {
    return m > 2 && (m & 1) != 0 && m < (static_cast<u64>(1) << 31);
}

PowmodBatchFn select_powmod_batch(u64 m) {
    if (avx2_supported() && avx2_eligible(m)) return powmod_batch_avx2;
    return powmod_batch_scalar;
}

const char* selected_kernel_name(u64 m) {
    return select_powmod_batch(m) == powmod_batch_avx2 ? "avx2-montgomery32" : "scalar";
}

}  // namespace cyclosieve::kernels
