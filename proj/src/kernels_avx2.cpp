#include "cyclosieve/kernels.hpp"

#include <immintrin.h>

namespace cyclosieve::kernels {

namespace {

// Montgomery arithmetic with R = 2^32, odd modulus m < 2^31.
// Each 64-bit lane carries one residue in its low 32 bits.

u32 neg_inv32(u64 m) {
    u32 x = static_cast<u32>(m);  // m odd: Newton iteration doubles correct bits
    for (int i = 0; i < 5; ++i) x *= 2 - static_cast<u32>(m) * x;
    return static_cast<u32>(0) - x;
}

inline __m256i mont_mul(__m256i a, __m256i b, __m256i vm, __m256i vminv) {
    __m256i t = _mm256_mul_epu32(a, b);
    __m256i q = _mm256_mul_epu32(t, vminv);          // only low 32 bits of q are used below
    __m256i t2 = _mm256_mul_epu32(q, vm);
    __m256i s = _mm256_srli_epi64(_mm256_add_epi64(t, t2), 32);
    __m256i ge = _mm256_or_si256(_mm256_cmpgt_epi64(s, vm), _mm256_cmpeq_epi64(s, vm));
    return _mm256_sub_epi64(s, _mm256_and_si256(ge, vm));
}

}  // namespace

void powmod_batch_avx2(const u64* bases, std::size_t n, u64 exp, u64 m, u64* out) {
    const u64 r1 = (static_cast<u64>(1) << 32) % m;                    // mont(1)
    const u64 r2 = mulmod(r1, r1, m);                                  // R^2 mod m
    const __m256i vm = _mm256_set1_epi64x(static_cast<long long>(m));
    const __m256i vminv = _mm256_set1_epi64x(static_cast<long long>(neg_inv32(m)));
    const __m256i vr2 = _mm256_set1_epi64x(static_cast<long long>(r2));
    const __m256i vone = _mm256_set1_epi64x(1);

    int top = 63;
    while (top > 0 && !((exp >> top) & 1)) --top;

    std::size_t i = 0;
    alignas(32) u64 lane[4];
    for (; i + 4 <= n; i += 4) {
        for (int k = 0; k < 4; ++k) lane[k] = bases[i + k] % m;
        __m256i b = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane));
        __m256i bm = mont_mul(b, vr2, vm, vminv);                      // to Montgomery domain
        __m256i acc = _mm256_set1_epi64x(static_cast<long long>(r1));
        if (exp != 0) {
            acc = bm;
            for (int bit = top - 1; bit >= 0; --bit) {
                acc = mont_mul(acc, acc, vm, vminv);
                if ((exp >> bit) & 1) acc = mont_mul(acc, bm, vm, vminv);
            }
        }
        acc = mont_mul(acc, vone, vm, vminv);                          // back to normal domain
        _mm256_store_si256(reinterpret_cast<__m256i*>(lane), acc);
        for (int k = 0; k < 4; ++k) out[i + k] = lane[k];
    }
    for (; i < n; ++i) out[i] = powmod(bases[i], exp, m);
}

}  // namespace cyclosieve::kernels
