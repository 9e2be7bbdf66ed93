#include "cyclosieve/numtheory.hpp"

#include <algorithm>
#include <numeric>

namespace cyclosieve {

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 powmod(u64 base, const mpz_class& exp, u64 m) {
    if (m == 1) return 0;
    if (exp.fits_ulong_p()) return powmod(base, static_cast<u64>(exp.get_ui()), m);
    u64 acc = 1;
    base %= m;
    size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        acc = mulmod(acc, acc, m);
        if (mpz_tstbit(exp.get_mpz_t(), i)) acc = mulmod(acc, base, m);
    }
    return acc;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 invmod(u64 a, u64 m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), mpz_class(a).get_mpz_t(), mpz_class(m).get_mpz_t()) == 0)
        throw std::domain_error("invmod: not invertible");
    return r.get_ui();
}

u64 crt2(u64 a, u64 m1, u64 b, u64 m2) {
    if (gcd_u64(m1, m2) != 1) throw std::domain_error("crt2: moduli not coprime");
    // x = a + m1 * ((b - a) * m1^{-1} mod m2)
    u64 diff = submod(b % m2, a % m2, m2);
    u64 k = mulmod(diff, invmod(m1 % m2, m2), m2);
    return a % m1 + m1 * k;
}

namespace {

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

u64 next_prime_u64(u64 n) {
    u64 c = n < 2 ? 2 : n + 1;
    if (c > 2 && (c & 1) == 0) ++c;
    while (!is_prime_u64(c)) c += (c == 2) ? 1 : 2;
    return c;
}

std::vector<u32> primes_below(u32 bound) {
    std::vector<u32> out;
    if (bound <= 2) return out;
    std::vector<bool> comp(bound, false);
    for (u32 i = 2; i < bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = static_cast<u64>(i) * i; j < bound; j += i) comp[j] = true;
    }
    return out;
}

namespace {

u64 pollard_brent(u64 n) {
    if ((n & 1) == 0) return 2;
    u64 y = 2, c = 1, m = 128;
    for (;; ++c) {
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        y = c + 1;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = addmod(mulmod(y, y, n), c, n);
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = addmod(mulmod(y, y, n), c, n);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = addmod(mulmod(ys, ys, n), c, n);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<u64, unsigned>> factor_u64(u64 n) {
    std::vector<u64> primes;
    u64 rest = n;
    for (u64 p = 2; p * p <= rest && p < 1000000; p += (p == 2) ? 1 : 2) {
        while (rest % p == 0) {
            primes.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) factor_rec(rest, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.push_back({p, 1});
    }
    return out;
}

std::vector<std::pair<mpz_class, unsigned>> factor_mpz(const mpz_class& n) {
    if (n <= 0) throw std::domain_error("factor_mpz: argument must be positive");
    std::vector<std::pair<mpz_class, unsigned>> out;
    if (n.fits_ulong_p()) {
        for (auto& [p, e] : factor_u64(n.get_ui())) out.push_back({mpz_class(p), e});
        return out;
    }
    mpz_class rest = n;
    for (u64 p = 2; p < 1000000; p += (p == 2) ? 1 : 2) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            out.push_back({mpz_class(p), e});
        }
        if (rest.fits_ulong_p()) break;
    }
    if (rest > 1) {
        if (rest.fits_ulong_p()) {
            for (auto& [p, e] : factor_u64(rest.get_ui())) out.push_back({mpz_class(p), e});
        } else {
            // rho on mpz; cofactors at desk scale are either prime or split quickly
            std::vector<mpz_class> stack{rest};
            gmp_randclass rng(gmp_randinit_default);
            rng.seed(0xC1C105EEull);
            while (!stack.empty()) {
                mpz_class m = stack.back();
                stack.pop_back();
                if (m == 1) continue;
                if (mpz_probab_prime_p(m.get_mpz_t(), 40)) {
                    out.push_back({m, 1});
                    continue;
                }
                mpz_class x = rng.get_z_range(m - 3) + 2, y = x, c = rng.get_z_range(m - 1) + 1, g = 1;
                while (g == 1) {
                    x = (x * x + c) % m;
                    y = (y * y + c) % m;
                    y = (y * y + c) % m;
                    mpz_class d = x > y ? x - y : y - x;
                    if (d == 0) break;
                    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
                }
                if (g == 1 || g == m) {
                    stack.push_back(m);  // retry with fresh parameters
                } else {
                    stack.push_back(g);
                    stack.push_back(m / g);
                }
            }
            std::sort(out.begin(), out.end(),
                      [](auto& a, auto& b) { return a.first < b.first; });
            std::vector<std::pair<mpz_class, unsigned>> merged;
            for (auto& [p, e] : out) {
                if (!merged.empty() && merged.back().first == p)
                    merged.back().second += e;
                else
                    merged.push_back({p, e});
            }
            return merged;
        }
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

std::vector<u64> divisors_of(u64 n) {
    std::vector<u64> out{1};
    for (auto& [p, e] : factor_u64(n)) {
        size_t sz = out.size();
        u64 pe = 1;
        for (unsigned i = 0; i < e; ++i) {
            pe *= p;
            for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 order_mod(u64 a, u64 modulus) {
    a %= modulus;
    if (modulus == 1) return 1;
    if (gcd_u64(a, modulus) != 1) throw std::domain_error("order_mod: not a unit");
    // order divides lambda(modulus) | phi(modulus); descend over the factorization of phi
    u64 phi = 1;
    for (auto& [p, e] : factor_u64(modulus)) {
        u64 pe = 1;
        for (unsigned i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    u64 o = phi;
    for (auto& [p, e] : factor_u64(phi)) {
        (void)e;
        while (o % p == 0 && powmod(a, o / p, modulus) == 1) o /= p;
    }
    return o;
}

std::vector<u64> irregular_indices(u64 p) {
    if (p < 3 || !is_prime_u64(p)) throw std::domain_error("irregular_indices: p must be an odd prime");
    if (p == 3) return {};
    std::vector<u64> inv(p);
    inv[1] = 1;
    for (u64 i = 2; i < p; ++i) inv[i] = mulmod(p - p / i, inv[p % i], p);
    // B_m = -1/(m+1) * sum_{j<m} C(m+1,j) B_j; for m <= p-3 the denominator of B_m is
    // prime to p, so B_m mod p is well defined and vanishes iff p divides the numerator
    std::vector<u64> binom(p, 0), b(p - 2, 0);
    b[0] = 1;
    binom[0] = 1;
    binom[1] = 1;
    for (u64 m = 1; m <= p - 3; ++m) {
        for (u64 j = m + 1; j >= 1; --j) binom[j] = addmod(binom[j], binom[j - 1], p);
        u64 s = 0;
        for (u64 j = 0; j < m; ++j) s = addmod(s, mulmod(binom[j], b[j], p), p);
        b[m] = mulmod(submod(0, s, p), inv[m + 1], p);
    }
    std::vector<u64> out;
    for (u64 m = 2; m + 3 <= p; m += 2)
        if (b[m] == 0) out.push_back(m);
    return out;
}

bool is_regular_prime(u64 p) { return irregular_indices(p).empty(); }

}  // namespace cyclosieve
