#include "cyclosieve/cyclotomy.hpp"

#include <algorithm>

namespace cyclosieve {

IntPair::IntPair(mpz_class u_, mpz_class v_) : u(std::move(u_)), v(std::move(v_)) {
    if (u == 0 || v == 0) throw std::invalid_argument("IntPair: u and v must be nonzero");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
    if (g != 1) throw std::invalid_argument("IntPair: u and v must be coprime");
}

namespace {

// exact division of polynomials over Z by (X^k - 1), coefficients low-to-high
void divide_by_xk_minus_1(std::vector<mpz_class>& c, u64 k) {
    std::vector<mpz_class> q(c.size() - k);
    for (size_t i = c.size(); i-- > k;) {
        q[i - k] = c[i];
        c[i - k] += c[i];  // remainder bookkeeping: c - q_i X^{i-k} (X^k - 1)
        c[i] = 0;
    }
    q.swap(c);
}

void multiply_by_xk_minus_1(std::vector<mpz_class>& c, u64 k) {
    std::vector<mpz_class> out(c.size() + k);
    for (size_t i = 0; i < c.size(); ++i) {
        out[i + k] += c[i];
        out[i] -= c[i];
    }
    out.swap(c);
}

int moebius(u64 n) {
    int mu = 1;
    for (auto& [p, e] : factor_u64(n)) {
        (void)p;
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

}  // namespace

std::vector<mpz_class> cyclotomic_poly(u64 m) {
    if (m == 0) throw std::invalid_argument("cyclotomic_poly: m must be positive");
    if (factor_u64(m).size() > 8)
        throw std::invalid_argument("cyclotomic_poly: more than 8 distinct prime factors unsupported");
    // Phi_m = prod over d | m of (X^{m/d} - 1)^{mu(d)}
    std::vector<mpz_class> poly{1};
    std::vector<u64> pending_div;
    for (u64 d : divisors_of(m)) {
        int mu = moebius(d);
        if (mu == 1)
            multiply_by_xk_minus_1(poly, m / d);
        else if (mu == -1)
            pending_div.push_back(m / d);
    }
    for (u64 k : pending_div) divide_by_xk_minus_1(poly, k);
    return poly;
}

mpz_class phi_homogeneous(u64 m, const mpz_class& a, const mpz_class& b) {
    if (a == 0 && b == 0) throw std::invalid_argument("phi_homogeneous: (0,0) rejected");
    auto c = cyclotomic_poly(m);
    size_t deg = c.size() - 1;
    mpz_class r = c[deg];
    mpz_class bp = 1;
    for (size_t i = deg; i-- > 0;) {
        bp *= b;
        r = r * a + c[i] * bp;
    }
    return r;
}

u64 mult_order(const mpz_class& a, u64 q) {
    if (!is_prime_u64(q)) throw std::invalid_argument("mult_order: q must be prime");
    mpz_class red = a % mpz_class(q);
    if (red < 0) red += q;
    u64 av = red.get_ui();
    if (av == 0) throw std::domain_error("mult_order: a divisible by q");
    u64 o = q - 1;
    for (auto& [p, e] : factor_u64(q - 1)) {
        (void)e;
        while (o % p == 0 && powmod(av, o / p, q) == 1) o /= p;
    }
    return o;
}

std::pair<u32, mpz_class> residue_frame(u64 p, u64 q) {
    if (q == p) throw std::invalid_argument("residue_frame: q = p rejected");
    if (p < 3 || !is_prime_u64(p)) throw std::invalid_argument("residue_frame: p must be an odd prime");
    if (!is_prime_u64(q)) throw std::invalid_argument("residue_frame: q must be prime");
    u64 f = order_mod(q % p, p);
    mpz_class qf;
    mpz_ui_pow_ui(qf.get_mpz_t(), q, f);
    return {static_cast<u32>(f), (qf - 1) / p};
}

std::pair<u64, u32> split_n(u64 n, u64 p) {
    if (n == 0) throw std::invalid_argument("split_n: n must be positive");
    u64 d = n;
    u32 r = 0;
    while (d % p == 0) {
        d /= p;
        ++r;
    }
    return {d, r};
}

CycloParams attach_pair(u64 p, u64 q, const IntPair& pair, u64 size_budget_bits) {
    if (q == 2 || q == p) throw std::invalid_argument("attach_pair: q must avoid {2, p}");
    if (mpz_divisible_ui_p(pair.u.get_mpz_t(), q) || mpz_divisible_ui_p(pair.v.get_mpz_t(), q))
        throw std::domain_error("attach_pair: pair degenerate at q");

    mpz_class uu = pair.u % mpz_class(q), vv = pair.v % mpz_class(q);
    if (uu < 0) uu += q;
    if (vv < 0) vv += q;
    u64 ratio = mulmod(vv.get_ui(), invmod(uu.get_ui(), q), q);

    CycloParams out;
    out.p = p;
    out.q = q;
    out.n = mult_order(mpz_class(ratio), q);
    std::tie(out.d, out.r) = split_n(out.n, p);
    std::tie(out.f, out.kappa) = residue_frame(p, q);

    u64 phin = 1;
    for (auto& [pp, e] : factor_u64(out.n)) {
        u64 pe = 1;
        for (unsigned i = 1; i < e; ++i) pe *= pp;
        phin *= pe * (pp - 1);
    }
    u64 maxbits = std::max(mpz_sizeinbase(pair.u.get_mpz_t(), 2), mpz_sizeinbase(pair.v.get_mpz_t(), 2));
    if (phin * maxbits <= size_budget_bits) {
        mpz_class val = phi_homogeneous(out.n, pair.u, pair.v);
        if (!mpz_divisible_ui_p(val.get_mpz_t(), q))
            throw std::logic_error("attach_pair: q does not divide Phi_n(u, v)");
        out.phi_checked = true;
    }
    return out;
}

CycloParams frame_for_n(u64 p, u64 q, u64 n) {
    if (q == 2 || q == p) throw std::invalid_argument("frame_for_n: q must avoid {2, p}");
    if (n == 0 || gcd_u64(n, q) != 1) throw std::invalid_argument("frame_for_n: need n >= 1 coprime to q");
    CycloParams out;
    out.p = p;
    out.q = q;
    out.n = n;
    std::tie(out.d, out.r) = split_n(n, p);
    std::tie(out.f, out.kappa) = residue_frame(p, q);
    return out;
}

}  // namespace cyclosieve
