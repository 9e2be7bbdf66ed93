#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cyclosieve {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 m) {
    return a >= b ? a - b : a + (m - b);
}

u64 powmod(u64 base, u64 exp, u64 m);
u64 powmod(u64 base, const mpz_class& exp, u64 m);

u64 gcd_u64(u64 a, u64 b);

// least non-negative x with x = a mod m1, x = b mod m2; gcd(m1,m2) must be 1
u64 crt2(u64 a, u64 m1, u64 b, u64 m2);

u64 invmod(u64 a, u64 m);

bool is_prime_u64(u64 n);
u64 next_prime_u64(u64 n);  // least prime > n

std::vector<u32> primes_below(u32 bound);

// prime factorization, ascending; trial division then Pollard-Brent rho
std::vector<std::pair<u64, unsigned>> factor_u64(u64 n);
std::vector<std::pair<mpz_class, unsigned>> factor_mpz(const mpz_class& n);

std::vector<u64> divisors_of(u64 n);  // ascending

// least m >= 1 with a^m = 1 mod modulus (modulus need not be prime); gcd(a, modulus) must be 1
u64 order_mod(u64 a, u64 modulus);

// even indices m in [2, p-3] with p dividing the numerator of the Bernoulli number B_m,
// found by running the defining recurrence for B_0..B_{p-3} entirely mod p
std::vector<u64> irregular_indices(u64 p);
bool is_regular_prime(u64 p);

}  // namespace cyclosieve
