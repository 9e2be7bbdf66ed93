#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclosieve/criteria.hpp"

namespace cyclosieve {

// primes q < bound, q != p, with ord_p(q) even and q^f not 1 mod p^2
std::vector<u64> even_order_primes(u64 p, u64 bound);

// the published p = 491 table, verbatim including its two duplicated entries
const std::vector<u64>& published_even_order_491();

struct ListComparison {
    std::vector<u64> computed_only;
    std::vector<u64> published_only;
};

// computed list vs the published one after deduplication
ListComparison compare_even_order_491();

enum class ScanMode { main_only, special_auto };

struct ScanOptions {
    u64 p = 5;
    u64 q_min = 7;
    u64 q_max = 0;
    ScanMode mode = ScanMode::main_only;
    bool fast_only = false;   // only q = 1 mod p, keeping every context inside F_q
    bool include_last = true; // main families run k up to p-1
    unsigned workers = 1;
    unsigned checkpoint_every = 64;  // commits between checkpoint writes
    std::string checkpoint_path;     // empty disables checkpointing
    u64 stop_after = 0;              // stop cleanly after this many primes (0 = no limit)
};

struct ScanRecord {
    u64 p = 0, q = 0, n = 0;
    CriterionKind kind = CriterionKind::main_with_last;
    bool holds = false;
    u32 pass_count = 0;  // passing single comparisons (main) or clauses (special)
    u32 pass_total = 0;
    u64 ordinal = 0;
};

struct ScanAggregates {
    u64 primes_scanned = 0;
    u64 contexts = 0;
    u64 family_total = 0, family_pass = 0;
    u64 single_total = 0, single_pass = 0;
    u64 special_total = 0, special_pass = 0;
    std::map<u64, std::pair<u64, u64>> per_n;  // n -> (main families, passes)

    void merge(const ScanAggregates& o);
};

// receives records in ordinal order, single-threaded
class ScanSink {
  public:
    virtual ~ScanSink() = default;
    virtual void emit(const ScanRecord& rec) = 0;
    virtual u64 bytes_written() const { return 0; }
    virtual void flush() {}
};

struct ScanCheckpoint {
    ScanOptions opt;  // workers/stop_after are not part of the identity
    u64 last_q_done = 0;
    u64 next_ordinal = 0;
    u64 records_bytes = 0;
    ScanAggregates agg;
};

ScanCheckpoint load_checkpoint(const std::string& path);
void save_checkpoint(const std::string& path, const ScanCheckpoint& cp);

struct ScanResult {
    ScanAggregates agg;
    u64 last_q_done = 0;
    u64 next_ordinal = 0;
    bool resumed = false;
    bool stopped_early = false;
};

// one prime's worth of records (n ascending) and aggregate deltas; allow_fast = false
// forces the generic extension-field path even when q = 1 mod p (for equivalence tests)
struct QBatch {
    u64 q = 0;
    std::vector<ScanRecord> recs;
    ScanAggregates agg;
};
QBatch scan_one_prime(const ScanOptions& opt, u64 q, bool allow_fast = true);

ScanResult satisfaction_scan(const ScanOptions& opt, ScanSink* sink = nullptr,
                             const std::optional<ScanCheckpoint>& resume = std::nullopt);

struct GeneratorVerdict {
    u64 g = 0;
    bool holds = false;
    std::string note;
    std::vector<std::pair<u64, u64>> mu;  // (k, mu_k)
};

struct HypothesisResult {
    u64 p = 0, q = 0, n = 0;  // n = q - 1
    u64 generator_count = 0;  // phi(q-1)
    std::vector<GeneratorVerdict> per_generator;
    std::vector<u64> passing;
    bool exists_ideal = false;
};

// does any multiplicative generator xi of F_q^x satisfy the full congruence family?
HypothesisResult hypothesis_search(u64 p, u64 q);

struct RankReport {
    u64 p = 0, n = 0;
    u32 width = 0;  // p-2, or p-3 when n = 2p
    u32 trials_requested = 0, trials_used = 0;
    u32 rank = 0;
    bool saturated = false;
    std::vector<u64> ells;
};

// rank over F_p of the vectors (mu_2 - mu_1, ..., mu_{p-1} - mu_1) gathered from
// fully split auxiliary primes ell = 1 mod lcm(n, p), taken in ascending order
RankReport estimate_kummer_rank(u64 p, u64 n, u32 trials);

struct BoundsReport {
    u64 p = 0;
    double minkowski = 0.0;      // exp(minkowski_log); +inf once the degree is large
    double minkowski_log = 0.0;  // natural log, always finite
    double grh = 0.0;            // 12 (log |disc|)^2 with the discriminant computed exactly
    double grh_simplified = 0.0; // 12 ((p-2) log p)^2
    bool regularity_computed = false;
    bool regular = false;
    std::vector<u64> irregular;  // Bernoulli indices m with p | numerator(B_m)
};

BoundsReport bounds_report(u64 p, bool with_regularity = true);

}  // namespace cyclosieve
