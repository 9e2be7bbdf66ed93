#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "cyclosieve/cyclotomy.hpp"

using namespace cyclosieve;

static std::vector<mpz_class> Z(std::initializer_list<long> v) {
    return std::vector<mpz_class>(v.begin(), v.end());
}

TEST_CASE("small cyclotomic polynomials") {
    CHECK(cyclotomic_poly(1) == Z({-1, 1}));
    CHECK(cyclotomic_poly(2) == Z({1, 1}));
    CHECK(cyclotomic_poly(3) == Z({1, 1, 1}));
    CHECK(cyclotomic_poly(4) == Z({1, 0, 1}));
    CHECK(cyclotomic_poly(6) == Z({1, -1, 1}));
    CHECK(cyclotomic_poly(12) == Z({1, 0, -1, 0, 1}));
    CHECK(cyclotomic_poly(5) == Z({1, 1, 1, 1, 1}));
    CHECK(cyclotomic_poly(10) == Z({1, -1, 1, -1, 1}));
    CHECK_THROWS(cyclotomic_poly(0));
}

TEST_CASE("coefficient structure at larger indices") {
    // first index whose coefficients leave {-1, 0, 1}
    auto c105 = cyclotomic_poly(105);
    CHECK(c105.size() == 49);
    CHECK(c105[7] == -2);
    CHECK(c105[41] == -2);

    // Phi_m(1) = p for prime powers, 1 otherwise (m > 1)
    auto at1 = [](u64 m) {
        mpz_class s = 0;
        for (auto& c : cyclotomic_poly(m)) s += c;
        return s;
    };
    CHECK(at1(9) == 3);
    CHECK(at1(32) == 2);
    CHECK(at1(49) == 7);
    CHECK(at1(15) == 1);
    CHECK(at1(105) == 1);

    // degree = phi(m), leading coefficient 1
    for (u64 m : {30ull, 100ull, 491ull}) {
        auto c = cyclotomic_poly(m);
        CHECK(c.back() == 1);
    }
    CHECK(cyclotomic_poly(491).size() == 491);
    CHECK(cyclotomic_poly(30).size() == 9);

    // 2*3*5*7*11*13*17*19*23 has nine distinct prime factors
    CHECK_THROWS(cyclotomic_poly(223092870ull));
}

TEST_CASE("phi_homogeneous") {
    CHECK(phi_homogeneous(6, 2, 1) == 3);
    CHECK(phi_homogeneous(1, 7, 3) == 4);   // a - b
    CHECK(phi_homogeneous(2, 7, 3) == 10);  // a + b

    // b^phi(m) * Phi_m(a/b) == Phi_m(a, b), cross-checked by direct evaluation
    for (u64 m : {4ull, 6ull, 9ull, 12ull, 30ull}) {
        auto c = cyclotomic_poly(m);
        mpz_class a = 17, b = -5;
        mpz_class direct = 0, ap = 1;
        std::vector<mpz_class> bp(c.size(), 1);
        for (size_t i = c.size() - 1; i-- > 0;) bp[i] = bp[i + 1] * b;
        for (size_t i = 0; i < c.size(); ++i) {
            direct += c[i] * ap * bp[i];
            ap *= a;
        }
        CHECK(phi_homogeneous(m, a, b) == direct);
    }
    CHECK_THROWS(phi_homogeneous(6, 0, 0));
}

TEST_CASE("mult_order") {
    CHECK(mult_order(3, 7) == 6);
    CHECK(mult_order(2, 7) == 3);
    CHECK(mult_order(4, 11) == 5);
    CHECK(mult_order(10, 7) == 6);
    CHECK(mult_order(-1, 7) == 2);
    CHECK(mult_order(mpz_class("73786976294838206464"), 31) == 5);  // 2^66 = 2 mod 31
    CHECK_THROWS(mult_order(14, 7));
    CHECK_THROWS(mult_order(3, 15));
}

TEST_CASE("residue_frame and split_n") {
    auto [f57, k57] = residue_frame(5, 7);
    CHECK(f57 == 4);
    CHECK(k57 == 480);
    auto [f511, k511] = residue_frame(5, 11);
    CHECK(f511 == 1);
    CHECK(k511 == 2);
    auto [f531, k531] = residue_frame(5, 31);
    CHECK(f531 == 1);
    CHECK(k531 == 6);
    auto [f72, k72] = residue_frame(7, 2);
    CHECK(f72 == 3);
    CHECK(k72 == 1);
    CHECK_THROWS(residue_frame(5, 5));
    CHECK_THROWS(residue_frame(4, 7));
    CHECK_THROWS(residue_frame(5, 15));

    CHECK(split_n(50, 5) == std::pair<u64, u32>{2, 2});
    CHECK(split_n(12, 5) == std::pair<u64, u32>{12, 0});
    CHECK(split_n(5, 5) == std::pair<u64, u32>{1, 1});
    CHECK(split_n(10, 5) == std::pair<u64, u32>{2, 1});
    CHECK(split_n(1, 5) == std::pair<u64, u32>{1, 0});
    CHECK_THROWS(split_n(0, 5));
}

TEST_CASE("IntPair validation") {
    CHECK_THROWS(IntPair(0, 3));
    CHECK_THROWS(IntPair(4, 0));
    CHECK_THROWS(IntPair(2, 4));
    CHECK_NOTHROW(IntPair(-3, 5));
}

TEST_CASE("attach_pair worked example") {
    CycloParams pr = attach_pair(5, 7, IntPair(1, 3));
    CHECK(pr.p == 5);
    CHECK(pr.q == 7);
    CHECK(pr.n == 6);
    CHECK(pr.d == 6);
    CHECK(pr.r == 0);
    CHECK(pr.f == 4);
    CHECK(pr.kappa == 480);
    CHECK(pr.phi_checked);

    // v/u = 4 mod 11, of order 5
    CycloParams pr2 = attach_pair(5, 11, IntPair(3, 1));
    CHECK(pr2.n == 5);
    CHECK(pr2.d == 1);
    CHECK(pr2.r == 1);
    CHECK(pr2.f == 1);
    CHECK(pr2.kappa == 2);

    // negative entries reduce mod q first
    CycloParams pr3 = attach_pair(5, 7, IntPair(-1, 4));
    CHECK(pr3.n == mult_order(3, 7));
}

TEST_CASE("attach_pair rejections") {
    CHECK_THROWS(attach_pair(5, 5, IntPair(1, 3)));
    CHECK_THROWS(attach_pair(5, 2, IntPair(1, 3)));
    CHECK_THROWS(attach_pair(5, 3, IntPair(1, 3)));   // q | v
    CHECK_THROWS(attach_pair(5, 7, IntPair(7, 3)));   // q | u
}

TEST_CASE("attach_pair size budget") {
    mpz_class huge_v = (mpz_class(1) << 600) * 7 + 3;  // still 3 mod 7
    CycloParams full = attach_pair(5, 7, IntPair(1, huge_v));
    CHECK(full.n == 6);
    CHECK(full.phi_checked);

    CycloParams skipped = attach_pair(5, 7, IntPair(1, huge_v), 100);
    CHECK(skipped.n == 6);
    CHECK_FALSE(skipped.phi_checked);
}

TEST_CASE("divisibility cross-check is the order condition") {
    // q | Phi_n(v, u) exactly when v/u has order n mod q (q coprime to n here)
    u64 q = 31;
    for (u64 x = 2; x < q; ++x) {
        u64 n = mult_order(x, q);
        for (u64 dvd : divisors_of(30)) {
            mpz_class val = phi_homogeneous(dvd, x, 1);
            bool divides = mpz_divisible_ui_p(val.get_mpz_t(), q) != 0;
            if (dvd % q != 0) CHECK(divides == (dvd == n));
        }
    }
}

TEST_CASE("frame_for_n") {
    CycloParams fr = frame_for_n(5, 31, 30);
    CHECK(fr.f == 1);
    CHECK(fr.kappa == 6);
    CHECK(fr.d == 6);
    CHECK(fr.r == 1);
    CHECK_FALSE(fr.phi_checked);

    CycloParams fr2 = frame_for_n(5, 7, 6);
    CHECK(fr2.f == 4);
    CHECK(fr2.kappa == 480);

    CHECK_THROWS(frame_for_n(5, 7, 0));
    CHECK_THROWS(frame_for_n(5, 7, 14));  // gcd(n, q) > 1
    CHECK_THROWS(frame_for_n(5, 2, 3));
}
