#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cyclosieve/serialize.hpp"
#include "cyclosieve/survey.hpp"

using namespace cyclosieve;

namespace {

struct MemSink : ScanSink {
    std::vector<ScanRecord> recs;
    u64 bytes = 0;
    void emit(const ScanRecord& r) override {
        recs.push_back(r);
        bytes += record_jsonl_line(r).size();
    }
    u64 bytes_written() const override { return bytes; }
};

bool same_record(const ScanRecord& a, const ScanRecord& b) {
    return a.p == b.p && a.q == b.q && a.n == b.n && a.kind == b.kind && a.holds == b.holds &&
           a.pass_count == b.pass_count && a.pass_total == b.pass_total && a.ordinal == b.ordinal;
}

bool same_agg(const ScanAggregates& a, const ScanAggregates& b) {
    return a.primes_scanned == b.primes_scanned && a.contexts == b.contexts &&
           a.family_total == b.family_total && a.family_pass == b.family_pass &&
           a.single_total == b.single_total && a.single_pass == b.single_pass &&
           a.special_total == b.special_total && a.special_pass == b.special_pass &&
           a.per_n == b.per_n;
}

}  // namespace

TEST_CASE("even order prime lists") {
    CHECK(even_order_primes(5, 5) == std::vector<u64>{2, 3});
    CHECK(even_order_primes(5, 50) == std::vector<u64>{2, 3, 13, 17, 19, 23, 29, 37, 47});
    CHECK(even_order_primes(7, 50) == std::vector<u64>{3, 5, 13, 17, 41, 47});
    CHECK_THROWS(even_order_primes(4, 100));
    CHECK_THROWS(even_order_primes(2, 100));

    // membership = even order and q^f != 1 mod p^2 (7 and 43 fall to the second test)
    auto list = even_order_primes(5, 200);
    for (u64 q = 2; q < 200; q = next_prime_u64(q)) {
        if (q == 5) continue;
        u64 f = order_mod(q % 5, 5);
        bool want = f % 2 == 0 && powmod(q % 25, f, 25) != 1;
        bool got = std::find(list.begin(), list.end(), q) != list.end();
        CHECK(got == want);
    }
}

TEST_CASE("published 491 table and its comparison") {
    const auto& pub = published_even_order_491();
    CHECK(pub.size() == 48);
    CHECK(std::count(pub.begin(), pub.end(), 193) == 2);
    CHECK(std::count(pub.begin(), pub.end(), 439) == 2);

    ListComparison cmp = compare_even_order_491();
    CHECK(cmp.computed_only == std::vector<u64>{449});
    CHECK(cmp.published_only.empty());

    CHECK(even_order_primes(491, 491).size() == 47);
}

TEST_CASE("fast and generic scan paths agree") {
    ScanOptions opt;
    opt.p = 5;
    for (u64 q : {11ull, 31ull, 41ull, 61ull, 101ull, 151ull, 491ull}) {
        QBatch fast = scan_one_prime(opt, q, true);
        QBatch slow = scan_one_prime(opt, q, false);
        REQUIRE(fast.recs.size() == slow.recs.size());
        for (size_t i = 0; i < fast.recs.size(); ++i) CHECK(same_record(fast.recs[i], slow.recs[i]));
        CHECK(same_agg(fast.agg, slow.agg));
    }
}

TEST_CASE("per-prime batch shape") {
    ScanOptions opt;
    opt.p = 5;
    QBatch b = scan_one_prime(opt, 31, true);
    REQUIRE(b.recs.size() == 5);  // n in {3, 5, 6, 15, 30}: skips 1, 2 and 2p
    std::vector<u64> ns;
    for (auto& r : b.recs) {
        ns.push_back(r.n);
        CHECK(r.kind == CriterionKind::main_with_last);
        CHECK(r.pass_total == 3);
        CHECK(r.holds == (r.pass_count == 3));
        CHECK((31 - 1) % r.n == 0);
    }
    CHECK(ns == std::vector<u64>{3, 5, 6, 15, 30});
    CHECK(b.agg.family_total == 5);
    CHECK(b.agg.single_total == 15);
    CHECK(b.agg.special_total == 0);
    CHECK(b.agg.primes_scanned == 1);

    opt.include_last = false;
    QBatch nl = scan_one_prime(opt, 31, true);
    for (auto& r : nl.recs) {
        CHECK(r.kind == CriterionKind::main_without_last);
        CHECK(r.pass_total == 2);
    }

    opt.include_last = true;
    opt.mode = ScanMode::special_auto;
    QBatch sp = scan_one_prime(opt, 31, true);
    REQUIRE(sp.recs.size() == 6);
    CHECK(sp.recs[1].kind == CriterionKind::special_n_p);
    CHECK(sp.recs[1].n == 5);
    CHECK(sp.recs[3].kind == CriterionKind::special_n_2p);
    CHECK(sp.recs[3].n == 10);
    CHECK(sp.agg.special_total == 2);
    CHECK(sp.agg.family_total == 4);
}

TEST_CASE("worker count does not change the stream") {
    ScanOptions a;
    a.p = 5;
    a.q_min = 7;
    a.q_max = 400;
    a.workers = 1;
    MemSink s1;
    ScanResult r1 = satisfaction_scan(a, &s1);

    ScanOptions b = a;
    b.workers = 4;
    MemSink s4;
    ScanResult r4 = satisfaction_scan(b, &s4);

    REQUIRE(s1.recs.size() == s4.recs.size());
    for (size_t i = 0; i < s1.recs.size(); ++i) CHECK(same_record(s1.recs[i], s4.recs[i]));
    CHECK(same_agg(r1.agg, r4.agg));
    CHECK(r1.last_q_done == r4.last_q_done);
    CHECK(r1.next_ordinal == s1.recs.size());

    for (size_t i = 0; i < s1.recs.size(); ++i) CHECK(s1.recs[i].ordinal == i);
    for (size_t i = 1; i < s1.recs.size(); ++i) {
        CHECK(s1.recs[i].q >= s1.recs[i - 1].q);
        if (s1.recs[i].q == s1.recs[i - 1].q) CHECK(s1.recs[i].n > s1.recs[i - 1].n);
    }
    CHECK_FALSE(r1.stopped_early);
}

TEST_CASE("stop_after halts cleanly") {
    ScanOptions opt;
    opt.p = 5;
    opt.q_min = 7;
    opt.q_max = 2000;
    opt.workers = 3;
    opt.stop_after = 10;
    MemSink sink;
    ScanResult r = satisfaction_scan(opt, &sink);
    CHECK(r.stopped_early);
    CHECK(r.agg.primes_scanned == 10);
    CHECK(r.last_q_done == 41);  // tenth prime from 7
}

TEST_CASE("checkpoint file round trip") {
    ScanCheckpoint cp;
    cp.opt.p = 5;
    cp.opt.q_min = 7;
    cp.opt.q_max = 1000;
    cp.opt.mode = ScanMode::special_auto;
    cp.opt.fast_only = true;
    cp.opt.include_last = false;
    cp.last_q_done = 241;
    cp.next_ordinal = 77;
    cp.records_bytes = 6021;
    cp.agg.primes_scanned = 12;
    cp.agg.contexts = 77;
    cp.agg.family_total = 60;
    cp.agg.family_pass = 3;
    cp.agg.single_total = 120;
    cp.agg.single_pass = 31;
    cp.agg.special_total = 17;
    cp.agg.special_pass = 1;
    cp.agg.per_n[4] = {9, 2};
    cp.agg.per_n[20] = {5, 0};

    std::string path = "/tmp/cyclosieve_test_cp.json";
    save_checkpoint(path, cp);
    ScanCheckpoint back = load_checkpoint(path);
    CHECK(back.opt.p == 5);
    CHECK(back.opt.q_min == 7);
    CHECK(back.opt.q_max == 1000);
    CHECK(back.opt.mode == ScanMode::special_auto);
    CHECK(back.opt.fast_only);
    CHECK_FALSE(back.opt.include_last);
    CHECK(back.last_q_done == 241);
    CHECK(back.next_ordinal == 77);
    CHECK(back.records_bytes == 6021);
    CHECK(same_agg(back.agg, cp.agg));
    std::remove(path.c_str());
}

TEST_CASE("interrupted scan resumes into the same stream") {
    std::string path = "/tmp/cyclosieve_test_resume_cp.json";
    ScanOptions opt;
    opt.p = 5;
    opt.q_min = 7;
    opt.q_max = 500;
    opt.workers = 2;
    opt.checkpoint_every = 3;
    opt.checkpoint_path = path;

    MemSink whole;
    ScanResult full = satisfaction_scan(opt, &whole);

    ScanOptions first = opt;
    first.stop_after = 25;
    MemSink part1;
    ScanResult r1 = satisfaction_scan(first, &part1);
    CHECK(r1.stopped_early);

    ScanCheckpoint cp = load_checkpoint(path);
    CHECK(cp.records_bytes == part1.bytes_written());
    CHECK(cp.next_ordinal == part1.recs.size());

    MemSink part2;
    ScanResult r2 = satisfaction_scan(opt, &part2, cp);
    CHECK(r2.resumed);
    CHECK_FALSE(r2.stopped_early);

    std::vector<ScanRecord> joined = part1.recs;
    joined.insert(joined.end(), part2.recs.begin(), part2.recs.end());
    REQUIRE(joined.size() == whole.recs.size());
    for (size_t i = 0; i < joined.size(); ++i) CHECK(same_record(joined[i], whole.recs[i]));
    CHECK(same_agg(r2.agg, full.agg));
    CHECK(r2.last_q_done == full.last_q_done);

    // a checkpoint for different scan settings is refused
    ScanOptions other = opt;
    other.q_max = 600;
    MemSink scratch;
    CHECK_THROWS(satisfaction_scan(other, &scratch, cp));
    std::remove(path.c_str());
}

TEST_CASE("hypothesis search") {
    HypothesisResult h3 = hypothesis_search(5, 3);
    CHECK(h3.n == 2);
    CHECK(h3.generator_count == 1);
    REQUIRE(h3.per_generator.size() == 1);
    CHECK(h3.per_generator[0].g == 2);
    CHECK_FALSE(h3.exists_ideal);
    CHECK(h3.passing.empty());
    CHECK(h3.per_generator[0].mu ==
          std::vector<std::pair<u64, u64>>{{1, 3}, {2, 1}, {3, 4}, {4, 2}});

    HypothesisResult h31 = hypothesis_search(5, 31);
    CHECK(h31.n == 30);
    CHECK(h31.generator_count == 8);  // phi(30)
    CHECK(h31.per_generator.size() == 8);
    CHECK_FALSE(h31.exists_ideal);

    // n = q - 1 = 2p carries a vanishing eps_{p-1}: flagged, never passing
    HypothesisResult h11 = hypothesis_search(5, 11);
    CHECK(h11.n == 10);
    CHECK(h11.generator_count == 4);
    CHECK_FALSE(h11.exists_ideal);
    for (auto& g : h11.per_generator) {
        CHECK_FALSE(g.holds);
        CHECK_FALSE(g.note.empty());
    }
}

TEST_CASE("kummer rank probes") {
    RankReport r12 = estimate_kummer_rank(5, 12, 50);
    CHECK(r12.width == 3);
    CHECK(r12.rank == 3);
    CHECK(r12.saturated);
    CHECK(r12.trials_used == 6);
    CHECK(r12.ells == std::vector<u64>{61, 181, 241, 421, 541, 601});

    RankReport r7 = estimate_kummer_rank(5, 7, 30);
    CHECK(r7.rank == 3);
    CHECK(r7.saturated);
    for (u64 ell : r7.ells) {
        CHECK(is_prime_u64(ell));
        CHECK(ell % 35 == 1);  // fully split: 1 mod lcm(n, p)
    }

    RankReport r10 = estimate_kummer_rank(5, 10, 30);
    CHECK(r10.width == 2);  // n = 2p drops k = p-1
    CHECK(r10.rank == 2);
    CHECK(r10.saturated);
    CHECK(r10.ells == std::vector<u64>{11, 31, 41});

    RankReport tiny = estimate_kummer_rank(5, 12, 2);
    CHECK(tiny.trials_used == 2);
    CHECK(tiny.ells.size() == 2);
    CHECK_FALSE(tiny.saturated);  // two rows cannot fill width 3
}

TEST_CASE("bounds report") {
    BoundsReport b5 = bounds_report(5);
    CHECK(b5.minkowski == doctest::Approx(1.699207906).epsilon(1e-6));
    CHECK(std::exp(b5.minkowski_log) == doctest::Approx(b5.minkowski));
    CHECK(b5.grh == doctest::Approx(279.7513625).epsilon(1e-6));
    CHECK(b5.grh_simplified == doctest::Approx(b5.grh).epsilon(1e-9));
    CHECK(b5.regularity_computed);
    CHECK(b5.regular);
    CHECK(b5.irregular.empty());

    CHECK(bounds_report(7).minkowski == doctest::Approx(4.129528).epsilon(1e-5));
    CHECK(bounds_report(11).minkowski == doctest::Approx(58.963154).epsilon(1e-5));
    CHECK(bounds_report(13).minkowski == doctest::Approx(306.415804).epsilon(1e-5));

    BoundsReport b37 = bounds_report(37);
    CHECK_FALSE(b37.regular);
    CHECK(b37.irregular == std::vector<u64>{32});

    BoundsReport skip = bounds_report(491, false);
    CHECK_FALSE(skip.regularity_computed);
    CHECK(skip.irregular.empty());
    CHECK(skip.grh_simplified == doctest::Approx(skip.grh).epsilon(1e-9));

    // the honest Minkowski value overflows double far before the log does
    BoundsReport big = bounds_report(401, false);
    CHECK(std::isinf(big.minkowski));
    CHECK(std::isfinite(big.minkowski_log));

    CHECK_THROWS(bounds_report(4));
    CHECK_THROWS(bounds_report(2));
}

TEST_CASE("record serialization is byte-stable") {
    ScanRecord rec;
    rec.p = 5;
    rec.q = 31;
    rec.n = 30;
    rec.kind = CriterionKind::main_with_last;
    rec.holds = false;
    rec.pass_count = 1;
    rec.pass_total = 3;
    rec.ordinal = 4;
    CHECK(record_jsonl_line(rec) ==
          "{\"p\":5,\"q\":31,\"n\":30,\"kind\":\"main-with-k-p-1\",\"holds\":false,"
          "\"pass_count\":1,\"pass_total\":3,\"ordinal\":4}\n");
    CHECK(record_csv_header() == "p,q,n,kind,holds,pass_count,pass_total,ordinal\n");
    CHECK(record_csv_line(rec) == "5,31,30,main-with-k-p-1,false,1,3,4\n");
}

TEST_CASE("aggregate json round trip") {
    ScanAggregates agg;
    agg.primes_scanned = 3;
    agg.contexts = 11;
    agg.family_total = 9;
    agg.family_pass = 2;
    agg.single_total = 27;
    agg.single_pass = 8;
    agg.special_total = 2;
    agg.special_pass = 0;
    agg.per_n[3] = {4, 1};
    agg.per_n[30] = {2, 0};
    ScanAggregates back = aggregates_from_json(to_json(agg));
    CHECK(same_agg(agg, back));

    ScanAggregates merged = agg;
    merged.merge(back);
    CHECK(merged.family_total == 18);
    CHECK(merged.per_n[3] == std::pair<u64, u64>{8, 2});
}

TEST_CASE("params and verdict json") {
    CycloParams pr = attach_pair(5, 7, IntPair(1, 3));
    ordered_json j = to_json(pr);
    CHECK(j["p"] == 5);
    CHECK(j["q"] == 7);
    CHECK(j["f"] == 4);
    CHECK(j["kappa"] == "480");
    CHECK(j["n"] == 6);
    CHECK(j["phi_checked"] == true);

    EmbeddingContext ctx = make_context_with_xi(frame_for_n(5, 31, 30), 3);
    ordered_json vj = to_json(check_main(ctx));
    CHECK(vj["kind"] == "main-with-k-p-1");
    CHECK(vj["holds"] == false);
    CHECK(vj["witnesses"].size() == 4);
    CHECK(vj["witnesses"][0][0] == 1);
    CHECK(vj["witnesses"][0][1] == 1);
    CHECK(vj["aux"]["violation"] == "mu(2)=0 != mu(1)=1");

    CHECK(mpz_str(mpz_class("123456789012345678901234567890")) ==
          "123456789012345678901234567890");
}
