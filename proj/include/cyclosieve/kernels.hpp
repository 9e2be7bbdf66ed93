#pragma once

#include <cstddef>

#include "cyclosieve/numtheory.hpp"

namespace cyclosieve::kernels {

// out[i] = bases[i]^exp mod m; one shared exponent and modulus per batch
using PowmodBatchFn = void (*)(const u64* bases, std::size_t n, u64 exp, u64 m, u64* out);

void powmod_batch_scalar(const u64* bases, std::size_t n, u64 exp, u64 m, u64* out);
void powmod_batch_avx2(const u64* bases, std::size_t n, u64 exp, u64 m, u64* out);

extern const bool avx2_compiled;
bool avx2_supported();              // compiled in and the CPU has it
bool avx2_eligible(u64 m);          // modulus fits the Montgomery-32 lane layout
PowmodBatchFn select_powmod_batch(u64 m);
const char* selected_kernel_name(u64 m);

}  // namespace cyclosieve::kernels
