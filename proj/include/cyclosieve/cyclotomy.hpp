#pragma once

#include <optional>
#include <vector>

#include "cyclosieve/numtheory.hpp"

namespace cyclosieve {

// coprime nonzero integers; v/u mod q generates the frame's root of unity
struct IntPair {
    mpz_class u, v;
    IntPair(mpz_class u_, mpz_class v_);
};

// the (p, q, n) arithmetic frame: f = ord_p(q), kappa = (q^f - 1)/p, n = d * p^r
struct CycloParams {
    u64 p = 0;
    u64 q = 0;
    u32 f = 0;
    mpz_class kappa;
    u64 n = 0;
    u64 d = 0;
    u32 r = 0;
    bool phi_checked = false;  // attach_pair divisibility cross-check ran (not skipped)
};

// coefficients low-to-high, exact integers
std::vector<mpz_class> cyclotomic_poly(u64 m);

// b^{phi(m)} * Phi_m(a/b), exact
mpz_class phi_homogeneous(u64 m, const mpz_class& a, const mpz_class& b);

// least n >= 1 with a^n = 1 mod q, q prime
u64 mult_order(const mpz_class& a, u64 q);

// f = mult_order(q, p), kappa = (q^f - 1)/p
std::pair<u32, mpz_class> residue_frame(u64 p, u64 q);

// n = d * p^r with gcd(d, p) = 1
std::pair<u64, u32> split_n(u64 n, u64 p);

inline constexpr u64 kPhiCheckDefaultBudgetBits = 1000000;

CycloParams attach_pair(u64 p, u64 q, const IntPair& pair,
                        u64 size_budget_bits = kPhiCheckDefaultBudgetBits);

// frame with n supplied directly (no pair); requires gcd(n, q) = 1
CycloParams frame_for_n(u64 p, u64 q, u64 n);

}  // namespace cyclosieve
