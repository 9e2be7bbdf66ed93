#pragma once

#include <map>
#include <string>
#include <vector>

#include "cyclosieve/residue_symbol.hpp"

namespace cyclosieve {

enum class EpsClass { cyclotomic_unit, one_minus_zeta_type, zero, two };

const char* eps_class_name(EpsClass c);

// eps[k] = 1 + xi_bar * z^k for k = 0..p-1, with the unit-type classification that
// the global element 1 + xi zeta^k carries (independent of the embedding)
struct EpsilonFamily {
    std::vector<FieldElement> eps;
    std::vector<EpsClass> cls;
};

EpsilonFamily epsilon_family(const EmbeddingContext& ctx);
EpsClass classify_epsilon(u64 k, u64 p, u64 n, u64 d, u32 r);

enum class CriterionKind {
    main_without_last,  // k = 1..p-2
    main_with_last,     // k = 1..p-1
    special_n_p,
    special_n_1,
    special_n_2p,
    special_n_2,
    twisted,
};

const char* kind_name(CriterionKind k);

struct CriterionVerdict {
    CriterionKind kind;
    bool holds = false;
    std::vector<std::pair<u64, u64>> witnesses;  // (k, mu_k) in k order
    std::map<std::string, std::string> aux;      // named clauses and context facts
};

// all mu(eps_k) equal over the checked k-range; n = 2p is rejected (eps_{p-1} = 0)
CriterionVerdict check_main(const EmbeddingContext& ctx, bool include_last = true);

enum class SpecialCase { n_p, n_1, n_2p, n_2 };

// the degenerate-n clause bundles; ctx.params.n must match the requested case
CriterionVerdict check_special(const EmbeddingContext& ctx, SpecialCase sc);

// mu_k - kappa * k^m constant over k = 1..p-2, kappa = mu(z); any m >= 1 prime to p
CriterionVerdict check_twisted(const EmbeddingContext& ctx, u64 m);

// prod_{j=0}^{p-1} (1 + xi z^j) == 1 + xi^p, an identity in any embedding
bool product_identity(const EmbeddingContext& ctx);

// sum_k mu(eps_k) == mu(W) + mu(u), W = (u^p + v^p)/(u + v); needs the pair and q not
// dividing u + v, and holds unconditionally (used as a cross-check, not a criterion)
bool symbol_sum_bridge(const EmbeddingContext& ctx);

enum class PrincipalityPolicy { regular, always, never };

struct AuditEntry {
    u64 q = 0;
    CycloParams params;
    std::vector<CriterionVerdict> verdicts;
    bool paper_applicable = false;  // principality hypothesis granted under the policy
    std::string first_violation;    // empty when everything holds
    std::string error;              // set when q had to be skipped
};

std::vector<AuditEntry> audit_pair(u64 p, const IntPair& pair, const std::vector<u64>& q_list,
                                   PrincipalityPolicy policy = PrincipalityPolicy::regular);

}  // namespace cyclosieve
