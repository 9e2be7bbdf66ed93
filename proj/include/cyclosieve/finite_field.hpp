#pragma once

#include <memory>
#include <vector>

#include "cyclosieve/numtheory.hpp"

namespace cyclosieve {

class ExtField;

// dense coefficient vector over F_q, length f, low-to-high, always reduced
struct FieldElement {
    const ExtField* field = nullptr;
    std::vector<u64> c;

    bool is_zero() const;
    bool is_constant() const;
};

bool operator==(const FieldElement& a, const FieldElement& b);
FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator*(const FieldElement& a, const FieldElement& b);

// F_{q^f} as F_q[X] / (modulus); modulus is the lexicographically smallest monic
// irreducible of degree f (coefficients compared low-to-high), so construction is
// deterministic across runs and machines; f = 1 uses modulus X by convention
class ExtField {
public:
    static std::shared_ptr<const ExtField> build(u64 q, u32 f);

    u64 q() const { return q_; }
    u32 f() const { return f_; }
    const std::vector<u64>& modulus() const { return modulus_; }
    const mpz_class& card_minus_1() const { return card1_; }
    const std::vector<std::pair<mpz_class, unsigned>>& card_factorization() const { return card_fac_; }
    const FieldElement& generator() const { return generator_; }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_constant(u64 v) const;
    FieldElement from_coeffs(std::vector<u64> coeffs) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement pow(const FieldElement& a, u64 e) const;
    FieldElement pow(const FieldElement& a, const mpz_class& e) const;

    mpz_class exact_order(const FieldElement& x) const;
    bool has_full_order(const FieldElement& x) const;

private:
    ExtField(u64 q, u32 f);

    u64 q_;
    u32 f_;
    std::vector<u64> modulus_;
    mpz_class card1_;
    std::vector<std::pair<mpz_class, unsigned>> card_fac_;
    FieldElement generator_;
};

std::shared_ptr<const ExtField> build_extension(u64 q, u32 f);

// smallest element in lexicographic coefficient order with order q^f - 1
FieldElement find_generator(const ExtField& field);

// generator^{(q^f - 1)/m}; requires m | q^f - 1
FieldElement element_of_order(const ExtField& field, u64 m);

mpz_class exact_order(const FieldElement& x);

// mu with x = z^mu, z of exact order p, linear scan of at most p multiplications
u64 dlog_small_subgroup(const FieldElement& x, const FieldElement& z, u64 p);

bool is_irreducible_poly(const std::vector<u64>& poly, u64 q);

}  // namespace cyclosieve
