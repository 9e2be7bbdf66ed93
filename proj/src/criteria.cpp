#include "cyclosieve/criteria.hpp"

#include <stdexcept>

#include "cyclosieve/numtheory.hpp"

namespace cyclosieve {

namespace {

struct ClauseLog {
    CriterionVerdict* v;
    bool all = true;
    void set(const std::string& name, bool pass) {
        v->aux["clause:" + name] = pass ? "pass" : "fail";
        if (!pass && all) {
            all = false;
            v->aux["violation"] = name;
        }
    }
};

}  // namespace

const char* eps_class_name(EpsClass c) {
    switch (c) {
        case EpsClass::cyclotomic_unit: return "cyclotomic-unit";
        case EpsClass::one_minus_zeta_type: return "one-minus-zeta-type";
        case EpsClass::zero: return "zero";
        case EpsClass::two: return "two";
    }
    return "?";
}

const char* kind_name(CriterionKind k) {
    switch (k) {
        case CriterionKind::main_without_last: return "main";
        case CriterionKind::main_with_last: return "main-with-k-p-1";
        case CriterionKind::special_n_p: return "special-n-p";
        case CriterionKind::special_n_1: return "special-n-1";
        case CriterionKind::special_n_2p: return "special-n-2p";
        case CriterionKind::special_n_2: return "special-n-2";
        case CriterionKind::twisted: return "twisted";
    }
    return "?";
}

EpsClass classify_epsilon(u64 k, u64 p, u64 n, u64 d, u32 r) {
    if (k == 0) {
        if (n == 1) return EpsClass::two;
        if (n == 2) return EpsClass::zero;
        return d == 2 ? EpsClass::one_minus_zeta_type : EpsClass::cyclotomic_unit;
    }
    if (d == 2 && r == 1 && k == p - 1) return EpsClass::zero;
    return d == 2 ? EpsClass::one_minus_zeta_type : EpsClass::cyclotomic_unit;
}

EpsilonFamily epsilon_family(const EmbeddingContext& ctx) {
    const ExtField& F = *ctx.field;
    const u64 p = ctx.params.p;
    EpsilonFamily fam;
    fam.eps.reserve(p);
    fam.cls.reserve(p);
    FieldElement zk = F.one();
    for (u64 k = 0; k < p; ++k) {
        FieldElement e = F.add(F.one(), F.mul(ctx.xi_bar, zk));
        const EpsClass c = classify_epsilon(k, p, ctx.params.n, ctx.params.d, ctx.params.r);
        if ((c == EpsClass::zero) != e.is_zero())
            throw std::logic_error("eps_k vanishing disagrees with its classification");
        fam.eps.push_back(std::move(e));
        fam.cls.push_back(c);
        if (k + 1 < p) zk = F.mul(zk, ctx.z);
    }
    return fam;
}

CriterionVerdict check_main(const EmbeddingContext& ctx, bool include_last) {
    const u64 p = ctx.params.p, n = ctx.params.n;
    if (n == 2 * p)
        throw std::invalid_argument("n = 2p makes eps_{p-1} vanish; use check_special");
    CriterionVerdict v;
    v.kind = include_last ? CriterionKind::main_with_last : CriterionKind::main_without_last;
    const EpsilonFamily fam = epsilon_family(ctx);
    const u64 k_hi = include_last ? p - 1 : p - 2;
    bool holds = true;
    u64 mu1 = 0;
    for (u64 k = 1; k <= k_hi; ++k) {
        if (fam.eps[k].is_zero()) throw std::logic_error("vanishing eps_k with n != 2p");
        const u64 mu = symbol(ctx, fam.eps[k]).mu;
        v.witnesses.push_back({k, mu});
        if (k == 1) {
            mu1 = mu;
        } else if (mu != mu1 && holds) {
            holds = false;
            v.aux["violation"] = "mu(" + std::to_string(k) + ")=" + std::to_string(mu) +
                                 " != mu(1)=" + std::to_string(mu1);
        }
    }
    v.holds = holds;
    v.aux["n"] = std::to_string(n);
    v.aux["kappa_eff_mod_p"] = std::to_string(ctx.kappa_eff_mod_p());
    if (n == 1) v.aux["special_case_applicable"] = kind_name(CriterionKind::special_n_1);
    if (n == 2) v.aux["special_case_applicable"] = kind_name(CriterionKind::special_n_2);
    if (n == p) v.aux["special_case_applicable"] = kind_name(CriterionKind::special_n_p);
    return v;
}

CriterionVerdict check_special(const EmbeddingContext& ctx, SpecialCase sc) {
    const u64 p = ctx.params.p, q = ctx.params.q, n = ctx.params.n;
    if (p >= (1ull << 32)) throw std::overflow_error("p^2 overflows 64 bits");
    const ExtField& F = *ctx.field;
    const u64 want_n = sc == SpecialCase::n_p   ? p
                       : sc == SpecialCase::n_1 ? 1
                       : sc == SpecialCase::n_2p ? 2 * p
                                                 : 2;
    if (n != want_n) throw std::invalid_argument("context n does not match the special case");

    CriterionVerdict v;
    v.kind = sc == SpecialCase::n_p   ? CriterionKind::special_n_p
             : sc == SpecialCase::n_1 ? CriterionKind::special_n_1
             : sc == SpecialCase::n_2p ? CriterionKind::special_n_2p
                                        : CriterionKind::special_n_2;
    ClauseLog log{&v};

    const u64 p2 = p * p;
    const u64 qf = powmod(q % p2, static_cast<u64>(ctx.params.f), p2);
    v.aux["q^f mod p^2"] = std::to_string(qf);
    log.set("q^f=1 mod p^2", qf == 1);

    if (sc == SpecialCase::n_p || sc == SpecialCase::n_1) {
        bool allz = true;
        FieldElement zj = ctx.z;
        for (u64 j = 1; j <= p - 1; ++j) {
            const u64 mu = symbol(ctx, F.add(F.one(), zj)).mu;
            v.witnesses.push_back({j, mu});
            if (mu != 0) allz = false;
            if (j + 1 <= p - 1) zj = F.mul(zj, ctx.z);
        }
        log.set("unit-symbols-vanish", allz);
        const u64 mu2 = symbol(ctx, F.from_constant(2 % q)).mu;
        v.aux["mu(2)"] = std::to_string(mu2);
        log.set("symbol(2)=0", mu2 == 0);
        if (ctx.u_bar) {
            const u64 muu = symbol(ctx, *ctx.u_bar).mu;
            const u64 muv = symbol(ctx, *ctx.v_bar).mu;
            v.aux["mu(u)"] = std::to_string(muu);
            v.aux["mu(v)"] = std::to_string(muv);
            log.set("symbol(u)=0", muu == 0);
            log.set("symbol(v)=0", muv == 0);
        } else {
            v.aux["pair"] = "absent";
        }
    } else {
        const u64 mup = symbol(ctx, F.from_constant(p % q)).mu;
        v.aux["mu(p)"] = std::to_string(mup);
        bool bal = true;
        u64 mu1z = 0;
        FieldElement zj = ctx.z;
        for (u64 j = 1; j <= p - 1; ++j) {
            const u64 mu = symbol(ctx, F.sub(F.one(), zj)).mu;
            if (j == 1) mu1z = mu;
            v.witnesses.push_back({j, mu});
            if (addmod(mu, mup, p) != 0) bal = false;
            if (j + 1 <= p - 1) zj = F.mul(zj, ctx.z);
        }
        log.set("(1-z^j)-symbols-balance-mu(p)", bal);
        if (ctx.u_bar) {
            const u64 muu = symbol(ctx, *ctx.u_bar).mu;
            const u64 muv = symbol(ctx, *ctx.v_bar).mu;
            const u64 want = (p - mu1z) % p;
            v.aux["mu(u)"] = std::to_string(muu);
            v.aux["mu(v)"] = std::to_string(muv);
            v.aux["mu(1-z)"] = std::to_string(mu1z);
            log.set("symbol(u)=-symbol(1-z)", muu == want);
            log.set("symbol(v)=-symbol(1-z)", muv == want);
        } else {
            v.aux["pair"] = "absent";
        }
    }
    v.holds = log.all;
    v.aux["n"] = std::to_string(n);
    return v;
}

CriterionVerdict check_twisted(const EmbeddingContext& ctx, u64 m) {
    const u64 p = ctx.params.p;
    if (m == 0 || m % p == 0)
        throw std::invalid_argument("twist exponent must be >= 1 and prime to p");
    CriterionVerdict v;
    v.kind = CriterionKind::twisted;
    const u64 kappa = symbol(ctx, ctx.z).mu;
    const EpsilonFamily fam = epsilon_family(ctx);
    bool holds = true;
    u64 c1 = 0;
    for (u64 k = 1; k <= p - 2; ++k) {
        const u64 mu = symbol(ctx, fam.eps[k]).mu;
        v.witnesses.push_back({k, mu});
        const u64 c = submod(mu, mulmod(kappa, powmod(k, m, p), p), p);
        if (k == 1) {
            c1 = c;
        } else if (c != c1 && holds) {
            holds = false;
            v.aux["violation"] = "offset breaks at k=" + std::to_string(k);
        }
    }
    v.holds = holds;
    v.aux["m"] = std::to_string(m);
    v.aux["kappa"] = std::to_string(kappa);
    v.aux["offset"] = std::to_string(c1);
    v.aux["n"] = std::to_string(ctx.params.n);
    return v;
}

bool product_identity(const EmbeddingContext& ctx) {
    const ExtField& F = *ctx.field;
    FieldElement prod = F.one(), zj = F.one();
    for (u64 j = 0; j < ctx.params.p; ++j) {
        prod = F.mul(prod, F.add(F.one(), F.mul(ctx.xi_bar, zj)));
        zj = F.mul(zj, ctx.z);
    }
    return prod == F.add(F.one(), F.pow(ctx.xi_bar, ctx.params.p));
}

bool symbol_sum_bridge(const EmbeddingContext& ctx) {
    if (!ctx.u_bar || !ctx.v_bar) throw std::invalid_argument("bridge needs an attached pair");
    const u64 p = ctx.params.p, n = ctx.params.n;
    if (n == 2 || n == 2 * p)
        throw std::invalid_argument("bridge needs q dividing neither u + v nor any eps_k");
    const ExtField& F = *ctx.field;
    const EpsilonFamily fam = epsilon_family(ctx);
    u64 s = 0;
    for (u64 k = 1; k <= p - 1; ++k) s = addmod(s, symbol(ctx, fam.eps[k]).mu, p);
    const FieldElement w =
        F.mul(F.add(F.pow(*ctx.u_bar, p), F.pow(*ctx.v_bar, p)), F.inv(F.add(*ctx.u_bar, *ctx.v_bar)));
    const u64 rhs = addmod(symbol(ctx, w).mu, symbol(ctx, *ctx.u_bar).mu, p);
    return s == rhs;
}

std::vector<AuditEntry> audit_pair(u64 p, const IntPair& pair, const std::vector<u64>& q_list,
                                   PrincipalityPolicy policy) {
    bool applicable;
    switch (policy) {
        case PrincipalityPolicy::always: applicable = true; break;
        case PrincipalityPolicy::never: applicable = false; break;
        default: applicable = is_regular_prime(p); break;
    }
    std::vector<AuditEntry> out;
    out.reserve(q_list.size());
    for (u64 q : q_list) {
        AuditEntry e;
        e.q = q;
        try {
            e.params = attach_pair(p, q, pair);
            const EmbeddingContext ctx = make_context(e.params, pair);
            const u64 n = e.params.n;
            CriterionVerdict v;
            if (n == p)
                v = check_special(ctx, SpecialCase::n_p);
            else if (n == 1)
                v = check_special(ctx, SpecialCase::n_1);
            else if (n == 2 * p)
                v = check_special(ctx, SpecialCase::n_2p);
            else if (n == 2)
                v = check_special(ctx, SpecialCase::n_2);
            else
                v = check_main(ctx, true);
            e.paper_applicable = applicable;
            if (!v.holds) {
                auto it = v.aux.find("violation");
                e.first_violation = std::string(kind_name(v.kind)) + ": " +
                                    (it == v.aux.end() ? "violated" : it->second);
            }
            e.verdicts.push_back(std::move(v));
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace cyclosieve
