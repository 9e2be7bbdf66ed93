#include "cyclosieve/finite_field.hpp"

#include <algorithm>

#include "cyclosieve/cyclotomy.hpp"

namespace cyclosieve {

namespace {

// raw polynomial helpers over F_q, coefficients low-to-high, trailing zeros trimmed

void ptrim(std::vector<u64>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<u64> pmul(const std::vector<u64>& a, const std::vector<u64>& b, u64 q) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = addmod(out[i + j], mulmod(a[i], b[j], q), q);
    }
    return out;
}

void preduce(std::vector<u64>& a, const std::vector<u64>& m, u64 q) {
    size_t dm = m.size() - 1;
    u64 lead_inv = m.back() == 1 ? 1 : invmod(m.back(), q);
    while (a.size() > dm) {
        u64 coef = mulmod(a.back(), lead_inv, q);
        size_t shift = a.size() - 1 - dm;
        if (coef != 0)
            for (size_t i = 0; i <= dm; ++i)
                a[shift + i] = submod(a[shift + i], mulmod(coef, m[i], q), q);
        a.pop_back();
        ptrim(a);
        if (a.size() <= shift) break;
    }
    ptrim(a);
}

std::vector<u64> pgcd(std::vector<u64> a, std::vector<u64> b, u64 q) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        preduce(a, b, q);
        std::swap(a, b);
    }
    if (!a.empty() && a.back() != 1) {
        u64 inv = invmod(a.back(), q);
        for (auto& x : a) x = mulmod(x, inv, q);
    }
    return a;
}

std::vector<u64> ppowmod(const std::vector<u64>& base, const mpz_class& e, const std::vector<u64>& m, u64 q) {
    std::vector<u64> r{1};
    std::vector<u64> b = base;
    preduce(b, m, q);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = bits; i-- > 0;) {
        r = pmul(r, r, q);
        preduce(r, m, q);
        if (mpz_tstbit(e.get_mpz_t(), i)) {
            r = pmul(r, b, q);
            preduce(r, m, q);
        }
    }
    return r;
}

std::vector<u64> psub_x(std::vector<u64> a, u64 q) {  // a - X
    if (a.size() < 2) a.resize(2, 0);
    a[1] = submod(a[1], 1 % q, q);
    ptrim(a);
    return a;
}

}  // namespace

bool is_irreducible_poly(const std::vector<u64>& poly, u64 q) {
    std::vector<u64> g = poly;
    ptrim(g);
    if (g.size() < 2) return false;
    size_t f = g.size() - 1;
    if (f == 1) return true;
    if (g[0] == 0) return false;  // divisible by X
    mpz_class qf;
    std::vector<u64> x{0, 1};
    mpz_ui_pow_ui(qf.get_mpz_t(), q, f);
    if (!psub_x(ppowmod(x, qf, g, q), q).empty()) return false;
    for (auto& [l, e] : factor_u64(f)) {
        (void)e;
        mpz_class qe;
        mpz_ui_pow_ui(qe.get_mpz_t(), q, f / l);
        auto d = pgcd(psub_x(ppowmod(x, qe, g, q), q), g, q);
        if (d.size() != 1) return false;
    }
    return true;
}

bool FieldElement::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
}

bool FieldElement::is_constant() const {
    return std::all_of(c.begin() + 1, c.end(), [](u64 x) { return x == 0; });
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field == b.field && a.c == b.c;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) { return a.field->add(a, b); }
FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a.field->sub(a, b); }
FieldElement operator*(const FieldElement& a, const FieldElement& b) { return a.field->mul(a, b); }

ExtField::ExtField(u64 q, u32 f) : q_(q), f_(f) {
    if (!is_prime_u64(q)) throw std::invalid_argument("ExtField: q must be prime");
    if (f < 1 || f > 64) throw std::invalid_argument("ExtField: degree must be in [1, 64]");

    if (f == 1) {
        modulus_ = {0, 1};
    } else {
        // lex-smallest monic irreducible; constant term 0 never irreducible, skip that block
        std::vector<u64> cand(f + 1, 0);
        cand[f] = 1;
        bool found = false;
        for (cand[0] = 1; cand[0] < q && !found; ++cand[0]) {
            for (;;) {
                if (is_irreducible_poly(cand, q)) {
                    found = true;
                    break;
                }
                size_t pos = f - 1;  // odometer over c_1..c_{f-1}, last coordinate fastest
                while (pos >= 1 && cand[pos] == q - 1) cand[pos--] = 0;
                if (pos < 1) break;
                ++cand[pos];
            }
        }
        if (!found) throw std::logic_error("ExtField: no irreducible polynomial found");
        --cand[0];
        modulus_ = cand;
    }

    mpz_class card;
    mpz_ui_pow_ui(card.get_mpz_t(), q_, f_);
    card1_ = card - 1;

    // factor q^f - 1 through its cyclotomic pieces prod_{e | f} Phi_e(q)
    std::vector<std::pair<mpz_class, unsigned>> merged;
    for (u64 e : divisors_of(f_)) {
        mpz_class piece = phi_homogeneous(e, mpz_class(q_), mpz_class(1));
        for (auto& [pr, ex] : factor_mpz(piece)) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](auto& kv) { return kv.first == pr; });
            if (it == merged.end())
                merged.push_back({pr, ex});
            else
                it->second += ex;
        }
    }
    std::sort(merged.begin(), merged.end(), [](auto& a, auto& b) { return a.first < b.first; });
    card_fac_ = std::move(merged);

    // lex-smallest generator; constants are skipped when f > 1 (their order divides q - 1)
    FieldElement cur = zero();
    for (;;) {
        size_t pos = f_;
        while (pos-- > 0) {
            if (cur.c[pos] == q_ - 1)
                cur.c[pos] = 0;
            else {
                ++cur.c[pos];
                break;
            }
            if (pos == 0) throw std::logic_error("ExtField: generator search exhausted");
        }
        if (cur.is_zero()) throw std::logic_error("ExtField: generator search exhausted");
        if (f_ > 1 && cur.is_constant()) continue;
        if (has_full_order(cur)) {
            generator_ = cur;
            break;
        }
    }
}

std::shared_ptr<const ExtField> ExtField::build(u64 q, u32 f) {
    return std::shared_ptr<const ExtField>(new ExtField(q, f));
}

FieldElement ExtField::zero() const { return FieldElement{this, std::vector<u64>(f_, 0)}; }

FieldElement ExtField::one() const { return from_constant(1); }

FieldElement ExtField::from_constant(u64 v) const {
    auto e = zero();
    e.c[0] = v % q_;
    return e;
}

FieldElement ExtField::from_coeffs(std::vector<u64> coeffs) const {
    if (coeffs.size() > f_) throw std::invalid_argument("from_coeffs: too many coefficients");
    coeffs.resize(f_, 0);
    for (auto& x : coeffs) x %= q_;
    return FieldElement{this, std::move(coeffs)};
}

FieldElement ExtField::add(const FieldElement& a, const FieldElement& b) const {
    auto out = a;
    for (u32 i = 0; i < f_; ++i) out.c[i] = addmod(out.c[i], b.c[i], q_);
    return out;
}

FieldElement ExtField::sub(const FieldElement& a, const FieldElement& b) const {
    auto out = a;
    for (u32 i = 0; i < f_; ++i) out.c[i] = submod(out.c[i], b.c[i], q_);
    return out;
}

FieldElement ExtField::mul(const FieldElement& a, const FieldElement& b) const {
    if (f_ == 1) return FieldElement{this, {mulmod(a.c[0], b.c[0], q_)}};
    std::vector<u64> prod(2 * f_ - 1, 0);
    for (u32 i = 0; i < f_; ++i) {
        if (a.c[i] == 0) continue;
        for (u32 j = 0; j < f_; ++j)
            prod[i + j] = addmod(prod[i + j], mulmod(a.c[i], b.c[j], q_), q_);
    }
    for (size_t i = prod.size(); i-- > f_;) {
        u64 coef = prod[i];
        if (coef == 0) continue;
        prod[i] = 0;
        for (u32 j = 0; j < f_; ++j)  // modulus monic: X^f = -(c_0 + ... + c_{f-1} X^{f-1})
            prod[i - f_ + j] = submod(prod[i - f_ + j], mulmod(coef, modulus_[j], q_), q_);
    }
    prod.resize(f_);
    return FieldElement{this, std::move(prod)};
}

FieldElement ExtField::inv(const FieldElement& a) const {
    if (a.is_zero()) throw std::domain_error("ExtField::inv: zero element");
    if (f_ == 1) return FieldElement{this, {invmod(a.c[0], q_)}};
    // extended Euclid: r0 = modulus, r1 = a; maintain s with s * a = r (mod modulus)
    std::vector<u64> r0 = modulus_, r1(a.c);
    ptrim(r1);
    std::vector<u64> s0{}, s1{1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        std::vector<u64> quo(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
        std::vector<u64> rem = r0;
        u64 lead_inv = invmod(r1.back(), q_);
        while (rem.size() >= r1.size() && !rem.empty()) {
            u64 coef = mulmod(rem.back(), lead_inv, q_);
            size_t shift = rem.size() - r1.size();
            quo[shift] = coef;
            for (size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] = submod(rem[shift + i], mulmod(coef, r1[i], q_), q_);
            ptrim(rem);
        }
        // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - quo * s1)
        auto qs = pmul(quo, s1, q_);
        std::vector<u64> s2(std::max(s0.size(), qs.size()), 0);
        for (size_t i = 0; i < s2.size(); ++i) {
            u64 x = i < s0.size() ? s0[i] : 0;
            u64 y = i < qs.size() ? qs[i] : 0;
            s2[i] = submod(x, y, q_);
        }
        ptrim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) throw std::logic_error("ExtField::inv: modulus not irreducible?");
    u64 scale = invmod(r0[0], q_);
    for (auto& x : s0) x = mulmod(x, scale, q_);
    s0.resize(f_, 0);
    return FieldElement{this, std::move(s0)};
}

FieldElement ExtField::pow(const FieldElement& a, u64 e) const {
    FieldElement r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

FieldElement ExtField::pow(const FieldElement& a, const mpz_class& e) const {
    if (e < 0) return pow(inv(a), mpz_class(-e));
    if (e.fits_ulong_p()) return pow(a, static_cast<u64>(e.get_ui()));
    FieldElement r = a;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits - 1; i-- > 0;) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

mpz_class ExtField::exact_order(const FieldElement& x) const {
    if (x.is_zero()) throw std::domain_error("exact_order: zero element");
    mpz_class o = card1_;
    for (auto& [p, e] : card_fac_) {
        for (unsigned i = 0; i < e; ++i) {
            mpz_class cand = o / p;
            if (!mpz_divisible_p(o.get_mpz_t(), p.get_mpz_t())) break;
            if (pow(x, cand) == one())
                o = cand;
            else
                break;
        }
    }
    return o;
}

bool ExtField::has_full_order(const FieldElement& x) const {
    if (x.is_zero()) return false;
    for (auto& [p, e] : card_fac_) {
        (void)e;
        if (pow(x, mpz_class(card1_ / p)) == one()) return false;
    }
    return true;
}

std::shared_ptr<const ExtField> build_extension(u64 q, u32 f) { return ExtField::build(q, f); }

FieldElement find_generator(const ExtField& field) { return field.generator(); }

FieldElement element_of_order(const ExtField& field, u64 m) {
    if (m == 0 || !mpz_divisible_ui_p(field.card_minus_1().get_mpz_t(), m))
        throw std::domain_error("element_of_order: m does not divide q^f - 1");
    return field.pow(field.generator(), mpz_class(field.card_minus_1() / m));
}

mpz_class exact_order(const FieldElement& x) { return x.field->exact_order(x); }

u64 dlog_small_subgroup(const FieldElement& x, const FieldElement& z, u64 p) {
    FieldElement c = x.field->one();
    for (u64 mu = 0; mu < p; ++mu) {
        if (c == x) return mu;
        c = c * z;
    }
    throw std::domain_error("dlog_small_subgroup: element not in mu_p");
}

}  // namespace cyclosieve
