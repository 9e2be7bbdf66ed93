#pragma once

#include <optional>

#include "cyclosieve/cyclotomy.hpp"
#include "cyclosieve/finite_field.hpp"

namespace cyclosieve {

// one prime ideal of Q(xi, zeta) over q, realized as images xi_bar (order n) and
// z (order p) inside F_{q^{f'}}, f' = ord of q mod lcm(n, p); for r >= 1 the order-p
// image is the forced power xi_bar^t (t = 0 mod d, t = p^{r-1} mod p^r); for r = 0
// each admissible z = z0^{1+z_choice} models one of the p-1 conjugate ideals
struct EmbeddingContext {
    CycloParams params;
    std::shared_ptr<const ExtField> field;
    u32 f_prime = 0;
    mpz_class kappa_eff;  // (q^{f'} - 1)/p
    FieldElement xi_bar;
    FieldElement z;
    u64 t = 0;            // r >= 1 CRT exponent, 0 otherwise
    u32 z_choice = 0;
    std::optional<FieldElement> u_bar, v_bar;

    u64 kappa_eff_mod_p() const;
};

struct SymbolExponent {
    u64 mu = 0;  // 0 <= mu < p
};

u32 embedding_degree(const CycloParams& params);  // f' above

EmbeddingContext make_context(const CycloParams& params, const std::optional<IntPair>& pair,
                              u32 z_choice = 0,
                              std::shared_ptr<const ExtField> field_hint = nullptr);

// xi_bar forced to a chosen element of F_q^x (must have exact order n)
EmbeddingContext make_context_with_xi(const CycloParams& params, u64 xi_value, u32 z_choice = 0,
                                      std::shared_ptr<const ExtField> field_hint = nullptr);

SymbolExponent symbol(const EmbeddingContext& ctx, const FieldElement& alpha);

EmbeddingContext galois_transport(const EmbeddingContext& ctx, u64 j);

}  // namespace cyclosieve
