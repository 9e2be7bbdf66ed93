#include "cyclosieve/residue_symbol.hpp"

#include <stdexcept>
#include <utility>

#include "cyclosieve/numtheory.hpp"

namespace cyclosieve {

namespace {

u64 pow_u64_checked(u64 base, u32 e) {
    u64 r = 1;
    for (u32 i = 0; i < e; ++i) {
        if (r > UINT64_MAX / base) throw std::overflow_error("prime power overflows 64 bits");
        r *= base;
    }
    return r;
}

EmbeddingContext build_context(const CycloParams& params, const std::optional<IntPair>& pair,
                               const std::optional<u64>& xi_const, u32 z_choice,
                               std::shared_ptr<const ExtField> field_hint) {
    const u64 p = params.p, q = params.q, n = params.n;
    EmbeddingContext ctx;
    ctx.params = params;

    const u32 fp = embedding_degree(params);
    if (field_hint) {
        if (field_hint->q() != q || field_hint->f() != fp)
            throw std::invalid_argument("field hint has wrong q or degree");
        ctx.field = std::move(field_hint);
    } else {
        ctx.field = build_extension(q, fp);
    }
    ctx.f_prime = fp;
    const ExtField& F = *ctx.field;

    if (!mpz_divisible_ui_p(F.card_minus_1().get_mpz_t(), p))
        throw std::logic_error("p does not divide q^{f'} - 1");
    ctx.kappa_eff = F.card_minus_1() / p;

    if (xi_const) {
        ctx.xi_bar = F.from_constant(*xi_const % q);
        if (exact_order(ctx.xi_bar) != n)
            throw std::invalid_argument("supplied xi does not have order n");
    } else if (pair) {
        mpz_class uq = pair->u % q, vq = pair->v % q;
        if (uq < 0) uq += q;
        if (vq < 0) vq += q;
        if (uq == 0 || vq == 0) throw std::invalid_argument("q divides u*v");
        const u64 ratio = mulmod(vq.get_ui(), invmod(uq.get_ui(), q), q);
        if (mult_order(mpz_class(ratio), q) != n)
            throw std::invalid_argument("pair is inconsistent with n in params");
        ctx.xi_bar = F.from_constant(ratio);
        ctx.u_bar = F.from_constant(uq.get_ui());
        ctx.v_bar = F.from_constant(vq.get_ui());
    } else {
        ctx.xi_bar = element_of_order(F, n);
    }

    if (params.r >= 1) {
        if (z_choice != 0)
            throw std::invalid_argument("z_choice must be 0 when p divides n: the order-p image is forced");
        const u64 pr = pow_u64_checked(p, params.r);
        const u64 pe = pr / p;  // p^{r-1}
        ctx.t = crt2(0, params.d, pe, pr);
        ctx.z = F.pow(ctx.xi_bar, ctx.t);
    } else {
        if (z_choice >= p - 1) throw std::invalid_argument("z_choice out of range [0, p-2]");
        const FieldElement z0 = element_of_order(F, p);
        ctx.z = F.pow(z0, static_cast<u64>(z_choice) + 1);
    }
    ctx.z_choice = z_choice;

    if (exact_order(ctx.z) != p) throw std::logic_error("constructed z does not have order p");
    return ctx;
}

}  // namespace

u64 EmbeddingContext::kappa_eff_mod_p() const {
    return mpz_fdiv_ui(kappa_eff.get_mpz_t(), params.p);
}

u32 embedding_degree(const CycloParams& params) {
    const u64 g = gcd_u64(params.n, params.p);
    const u64 n_red = params.n / g;
    if (n_red > UINT64_MAX / params.p) throw std::overflow_error("lcm(n, p) overflows 64 bits");
    const u64 l = n_red * params.p;
    const u64 ord = order_mod(params.q % l, l);
    if (ord > UINT32_MAX) throw std::overflow_error("embedding degree exceeds 32 bits");
    return static_cast<u32>(ord);
}

EmbeddingContext make_context(const CycloParams& params, const std::optional<IntPair>& pair,
                              u32 z_choice, std::shared_ptr<const ExtField> field_hint) {
    return build_context(params, pair, std::nullopt, z_choice, std::move(field_hint));
}

EmbeddingContext make_context_with_xi(const CycloParams& params, u64 xi_value, u32 z_choice,
                                      std::shared_ptr<const ExtField> field_hint) {
    return build_context(params, std::nullopt, xi_value, z_choice, std::move(field_hint));
}

SymbolExponent symbol(const EmbeddingContext& ctx, const FieldElement& alpha) {
    if (alpha.is_zero()) throw std::invalid_argument("residue symbol undefined at 0");
    const FieldElement w = ctx.field->pow(alpha, ctx.kappa_eff);
    return {dlog_small_subgroup(w, ctx.z, ctx.params.p)};
}

EmbeddingContext galois_transport(const EmbeddingContext& ctx, u64 j) {
    const u64 p = ctx.params.p;
    if (j % p == 0) throw std::invalid_argument("transport exponent must be a unit mod p");
    const ExtField& F = *ctx.field;
    EmbeddingContext out = ctx;
    if (ctx.params.r == 0) {
        out.z = F.pow(ctx.z, j % p);
        const FieldElement z0 = element_of_order(F, p);
        out.z_choice = static_cast<u32>(dlog_small_subgroup(out.z, z0, p) - 1);
    } else {
        // the automorphism moving z to z^j must move xi_bar too; its exponent is
        // pinned down mod p^r by j and acts trivially on the order-d part
        const u64 pr = pow_u64_checked(p, ctx.params.r);
        const u64 jp = crt2(j % pr, pr, 1 % ctx.params.d, ctx.params.d);
        out.xi_bar = F.pow(ctx.xi_bar, jp);
        out.z = F.pow(ctx.z, j % p);
        // u/v were tied to the identity embedding of xi; the twisted context has no pair
        out.u_bar.reset();
        out.v_bar.reset();
    }
    return out;
}

}  // namespace cyclosieve
