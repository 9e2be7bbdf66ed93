#include "cyclosieve/kernels.hpp"

namespace cyclosieve::kernels {

void powmod_batch_scalar(const u64* bases, std::size_t n, u64 exp, u64 m, u64* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = powmod(bases[i], exp, m);
}

}  // namespace cyclosieve::kernels
