#include "cyclosieve/survey.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cyclosieve/kernels.hpp"
#include "cyclosieve/numtheory.hpp"
#include "cyclosieve/serialize.hpp"

namespace cyclosieve {

namespace {

u64 least_generator(u64 q) {
    const auto fac = factor_u64(q - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (const auto& [ell, e] : fac) {
            (void)e;
            if (powmod(g, (q - 1) / ell, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

u64 pow_u64(u64 base, u32 e) {
    u64 r = 1;
    while (e--) r *= base;
    return r;
}

u32 count_clause_passes(const CriterionVerdict& v, u32* total) {
    u32 pass = 0, tot = 0;
    for (const auto& [key, val] : v.aux) {
        if (key.rfind("clause:", 0) != 0) continue;
        ++tot;
        if (val == "pass") ++pass;
    }
    *total = tot;
    return pass;
}

void note_main_record(ScanAggregates& agg, const ScanRecord& rec) {
    agg.contexts += 1;
    agg.family_total += 1;
    agg.family_pass += rec.holds ? 1 : 0;
    agg.single_total += rec.pass_total;
    agg.single_pass += rec.pass_count;
    auto& pn = agg.per_n[rec.n];
    pn.first += 1;
    pn.second += rec.holds ? 1 : 0;
}

void note_special_record(ScanAggregates& agg, const ScanRecord& rec) {
    agg.contexts += 1;
    agg.special_total += 1;
    agg.special_pass += rec.holds ? 1 : 0;
}

// echelon-form insert; returns true when the row enlarged the span
bool rank_add_row(std::vector<std::vector<u64>>& basis, std::vector<u64> row, u64 p) {
    for (const auto& b : basis) {
        size_t lead = 0;
        while (lead < b.size() && b[lead] == 0) ++lead;
        if (lead < row.size() && row[lead] != 0) {
            const u64 c = mulmod(row[lead], invmod(b[lead], p), p);
            for (size_t j = lead; j < row.size(); ++j)
                row[j] = submod(row[j], mulmod(c, b[j], p), p);
        }
    }
    if (std::all_of(row.begin(), row.end(), [](u64 x) { return x == 0; })) return false;
    basis.push_back(std::move(row));
    std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
        size_t la = 0, lb = 0;
        while (la < a.size() && a[la] == 0) ++la;
        while (lb < b.size() && b[lb] == 0) ++lb;
        return la < lb;
    });
    return true;
}

}  // namespace

void ScanAggregates::merge(const ScanAggregates& o) {
    primes_scanned += o.primes_scanned;
    contexts += o.contexts;
    family_total += o.family_total;
    family_pass += o.family_pass;
    single_total += o.single_total;
    single_pass += o.single_pass;
    special_total += o.special_total;
    special_pass += o.special_pass;
    for (const auto& [n, fp] : o.per_n) {
        auto& pn = per_n[n];
        pn.first += fp.first;
        pn.second += fp.second;
    }
}

std::vector<u64> even_order_primes(u64 p, u64 bound) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("p must be an odd prime");
    if (p >= (1ull << 32)) throw std::overflow_error("p^2 overflows 64 bits");
    const u64 p2 = p * p;
    std::vector<u64> out;
    for (u64 q = 2; q < bound; q = next_prime_u64(q)) {
        if (q == p) continue;
        const u64 f = order_mod(q % p, p);
        if (f % 2 != 0) continue;
        if (powmod(q % p2, f, p2) == 1) continue;
        out.push_back(q);
    }
    return out;
}

const std::vector<u64>& published_even_order_491() {
    // as printed: 193 and 439 both appear twice
    static const std::vector<u64> list{
        2,   7,   19,  23,  29,  47,  53,  59,  67,  73,  89,  103, 109, 113, 137, 149,
        151, 157, 167, 173, 191, 193, 193, 211, 251, 271, 281, 283, 307, 311, 313, 317,
        337, 347, 353, 359, 367, 373, 383, 397, 421, 431, 433, 439, 443, 439, 479, 487};
    return list;
}

ListComparison compare_even_order_491() {
    const std::vector<u64> computed = even_order_primes(491, 491);
    std::vector<u64> published = published_even_order_491();
    std::sort(published.begin(), published.end());
    published.erase(std::unique(published.begin(), published.end()), published.end());
    ListComparison cmp;
    std::set_difference(computed.begin(), computed.end(), published.begin(), published.end(),
                        std::back_inserter(cmp.computed_only));
    std::set_difference(published.begin(), published.end(), computed.begin(), computed.end(),
                        std::back_inserter(cmp.published_only));
    return cmp;
}

QBatch scan_one_prime(const ScanOptions& opt, u64 q, bool allow_fast) {
    QBatch b;
    b.q = q;
    b.agg.primes_scanned = 1;
    const u64 p = opt.p;
    if (q == p || q == 2) return b;
    if (opt.fast_only && q % p != 1) return b;

    std::vector<u64> main_ns;
    std::vector<std::pair<u64, SpecialCase>> special_ns;
    for (u64 n : divisors_of(q - 1)) {
        if (n == 1 || n == 2) continue;
        if (n == 2 * p) {
            if (opt.mode == ScanMode::special_auto) special_ns.push_back({n, SpecialCase::n_2p});
            continue;
        }
        if (n == p && opt.mode == ScanMode::special_auto) {
            special_ns.push_back({n, SpecialCase::n_p});
            continue;
        }
        main_ns.push_back(n);
    }

    const u64 k_hi = opt.include_last ? p - 1 : p - 2;
    const bool fast = allow_fast && q % p == 1;

    if (fast && !main_ns.empty()) {
        const u64 kappa = (q - 1) / p;
        const u64 g = least_generator(q);
        const u64 z0 = powmod(g, kappa, q);
        struct Fam {
            u64 n, z;
        };
        std::vector<Fam> fams;
        fams.reserve(main_ns.size());
        std::vector<u64> bases;
        bases.reserve(main_ns.size() * k_hi);
        for (u64 n : main_ns) {
            const u64 xi = powmod(g, (q - 1) / n, q);
            const auto [d, r] = split_n(n, p);
            u64 z = z0;
            if (r >= 1) {
                const u64 pr = pow_u64(p, r);
                z = powmod(xi, crt2(0, d, pr / p, pr), q);
            }
            fams.push_back({n, z});
            u64 zk = 1;
            for (u64 k = 1; k <= k_hi; ++k) {
                zk = mulmod(zk, z, q);
                bases.push_back(addmod(1, mulmod(xi, zk, q), q));
            }
        }
        std::vector<u64> w(bases.size());
        kernels::select_powmod_batch(q)(bases.data(), bases.size(), kappa, q, w.data());
        size_t idx = 0;
        std::vector<u64> zp(p);
        for (const Fam& fam : fams) {
            zp[0] = 1;
            for (u64 i = 1; i < p; ++i) zp[i] = mulmod(zp[i - 1], fam.z, q);
            u64 mu1 = 0;
            bool holds = true;
            u32 passc = 0;
            for (u64 k = 1; k <= k_hi; ++k) {
                const u64 val = w[idx++];
                u64 mu = p;
                for (u64 i = 0; i < p; ++i)
                    if (zp[i] == val) {
                        mu = i;
                        break;
                    }
                if (mu == p) throw std::logic_error("power residue left the mu_p subgroup");
                if (k == 1) {
                    mu1 = mu;
                } else if (mu == mu1) {
                    ++passc;
                } else {
                    holds = false;
                }
            }
            ScanRecord rec;
            rec.p = p;
            rec.q = q;
            rec.n = fam.n;
            rec.kind = opt.include_last ? CriterionKind::main_with_last
                                        : CriterionKind::main_without_last;
            rec.holds = holds;
            rec.pass_count = passc;
            rec.pass_total = static_cast<u32>(k_hi - 1);
            note_main_record(b.agg, rec);
            b.recs.push_back(rec);
        }
    } else if (!main_ns.empty()) {
        std::map<u32, std::shared_ptr<const ExtField>> fields;
        for (u64 n : main_ns) {
            const CycloParams params = frame_for_n(p, q, n);
            const u32 fp = embedding_degree(params);
            auto& fld = fields[fp];
            if (!fld) fld = build_extension(q, fp);
            const EmbeddingContext ctx = make_context(params, std::nullopt, 0, fld);
            const CriterionVerdict v = check_main(ctx, opt.include_last);
            ScanRecord rec;
            rec.p = p;
            rec.q = q;
            rec.n = n;
            rec.kind = v.kind;
            rec.holds = v.holds;
            const u64 mu1 = v.witnesses.front().second;
            u32 passc = 0;
            for (size_t i = 1; i < v.witnesses.size(); ++i)
                if (v.witnesses[i].second == mu1) ++passc;
            rec.pass_count = passc;
            rec.pass_total = static_cast<u32>(v.witnesses.size() - 1);
            note_main_record(b.agg, rec);
            b.recs.push_back(rec);
        }
    }

    for (const auto& [n, sc] : special_ns) {
        const CycloParams params = frame_for_n(p, q, n);
        const EmbeddingContext ctx = make_context(params, std::nullopt, 0);
        const CriterionVerdict v = check_special(ctx, sc);
        ScanRecord rec;
        rec.p = p;
        rec.q = q;
        rec.n = n;
        rec.kind = v.kind;
        rec.holds = v.holds;
        rec.pass_count = count_clause_passes(v, &rec.pass_total);
        note_special_record(b.agg, rec);
        b.recs.push_back(rec);
    }

    std::sort(b.recs.begin(), b.recs.end(),
              [](const ScanRecord& a, const ScanRecord& c) { return a.n < c.n; });
    return b;
}

ScanCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    ordered_json j = ordered_json::parse(in);
    if (j.at("schema_version").get<int>() != 1)
        throw std::runtime_error("unsupported checkpoint schema");
    ScanCheckpoint cp;
    cp.opt.p = j.at("p").get<u64>();
    const std::string mode = j.at("mode").get<std::string>();
    cp.opt.mode = mode == "special-auto" ? ScanMode::special_auto : ScanMode::main_only;
    cp.opt.fast_only = j.at("fast_only").get<bool>();
    cp.opt.include_last = j.at("include_last").get<bool>();
    cp.opt.q_min = j.at("q_min").get<u64>();
    cp.opt.q_max = j.at("q_max").get<u64>();
    cp.last_q_done = j.at("last_q_done").get<u64>();
    cp.next_ordinal = j.at("next_ordinal").get<u64>();
    cp.records_bytes = j.at("records_bytes").get<u64>();
    cp.agg = aggregates_from_json(j.at("aggregates"));
    return cp;
}

void save_checkpoint(const std::string& path, const ScanCheckpoint& cp) {
    const ordered_json j{{"schema_version", 1},
                   {"p", cp.opt.p},
                   {"mode", cp.opt.mode == ScanMode::special_auto ? "special-auto" : "main-only"},
                   {"fast_only", cp.opt.fast_only},
                   {"include_last", cp.opt.include_last},
                   {"q_min", cp.opt.q_min},
                   {"q_max", cp.opt.q_max},
                   {"last_q_done", cp.last_q_done},
                   {"next_ordinal", cp.next_ordinal},
                   {"records_bytes", cp.records_bytes},
                   {"aggregates", to_json(cp.agg)}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

ScanResult satisfaction_scan(const ScanOptions& opt, ScanSink* sink,
                             const std::optional<ScanCheckpoint>& resume) {
    if (opt.p < 3 || !is_prime_u64(opt.p)) throw std::invalid_argument("p must be an odd prime");
    if (opt.q_max < opt.q_min) throw std::invalid_argument("empty q range");

    ScanResult res;
    u64 resume_floor = 0;
    if (resume) {
        const ScanOptions& r = resume->opt;
        if (r.p != opt.p || r.mode != opt.mode || r.fast_only != opt.fast_only ||
            r.include_last != opt.include_last || r.q_min != opt.q_min || r.q_max != opt.q_max)
            throw std::invalid_argument("checkpoint was written by an incompatible scan");
        res.agg = resume->agg;
        res.next_ordinal = resume->next_ordinal;
        res.last_q_done = resume->last_q_done;
        resume_floor = resume->last_q_done;
        res.resumed = true;
    }

    std::vector<u64> qs;
    const u64 lo = std::max(opt.q_min, resume_floor + 1);
    if (opt.q_max < UINT32_MAX) {
        for (u32 q : primes_below(static_cast<u32>(opt.q_max + 1)))
            if (q >= lo && q != opt.p) qs.push_back(q);
    } else {
        for (u64 q = lo > 2 ? next_prime_u64(lo - 1) : 2; q <= opt.q_max; q = next_prime_u64(q))
            if (q != opt.p) qs.push_back(q);
    }

    std::mutex mu;
    std::map<size_t, QBatch> pending;
    size_t next_commit = 0;
    u64 commits_since_checkpoint = 0;
    std::atomic<size_t> next_idx{0};
    std::atomic<bool> stop{false};
    const u64 stop_after = opt.stop_after;

    auto commit_locked = [&](QBatch& batch) {
        for (ScanRecord& rec : batch.recs) {
            rec.ordinal = res.next_ordinal++;
            if (sink) sink->emit(rec);
        }
        res.agg.merge(batch.agg);
        res.last_q_done = batch.q;
        ++commits_since_checkpoint;
        if (stop_after && next_commit + 1 >= stop_after) {
            stop.store(true, std::memory_order_relaxed);
            res.stopped_early = true;
        }
        if (!opt.checkpoint_path.empty() &&
            (commits_since_checkpoint >= opt.checkpoint_every || stop.load())) {
            if (sink) sink->flush();
            ScanCheckpoint cp;
            cp.opt = opt;
            cp.last_q_done = res.last_q_done;
            cp.next_ordinal = res.next_ordinal;
            cp.records_bytes = sink ? sink->bytes_written() : 0;
            cp.agg = res.agg;
            save_checkpoint(opt.checkpoint_path, cp);
            commits_since_checkpoint = 0;
        }
    };

    std::exception_ptr first_error;
    auto worker = [&] {
        try {
            for (;;) {
                if (stop.load(std::memory_order_relaxed)) break;
                const size_t i = next_idx.fetch_add(1, std::memory_order_relaxed);
                if (i >= qs.size()) break;
                QBatch batch = scan_one_prime(opt, qs[i]);
                std::lock_guard<std::mutex> lk(mu);
                pending.emplace(i, std::move(batch));
                for (auto it = pending.find(next_commit); it != pending.end();
                     it = pending.find(next_commit)) {
                    if (stop.load(std::memory_order_relaxed)) break;
                    commit_locked(it->second);
                    pending.erase(it);
                    ++next_commit;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(mu);
            if (!first_error) first_error = std::current_exception();
            stop.store(true, std::memory_order_relaxed);
        }
    };

    const unsigned nw = std::max(1u, opt.workers);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (unsigned i = 0; i < nw; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    if (sink) sink->flush();
    if (!opt.checkpoint_path.empty()) {
        ScanCheckpoint cp;
        cp.opt = opt;
        cp.last_q_done = res.last_q_done;
        cp.next_ordinal = res.next_ordinal;
        cp.records_bytes = sink ? sink->bytes_written() : 0;
        cp.agg = res.agg;
        save_checkpoint(opt.checkpoint_path, cp);
    }
    return res;
}

HypothesisResult hypothesis_search(u64 p, u64 q) {
    HypothesisResult res;
    res.p = p;
    res.q = q;
    const u64 n = q - 1;
    res.n = n;
    const CycloParams params = frame_for_n(p, q, n);
    const bool dead = n == 2 * p;
    std::shared_ptr<const ExtField> field = build_extension(q, embedding_degree(params));
    for (u64 g = 2; g < q; ++g) {
        if (order_mod(g, q) != q - 1) continue;
        ++res.generator_count;
        GeneratorVerdict gv;
        gv.g = g;
        if (dead) {
            gv.holds = false;
            gv.note = "eps_{p-1} = 0 when n = 2p: the family cannot hold";
        } else {
            const EmbeddingContext ctx = make_context_with_xi(params, g, 0, field);
            CriterionVerdict v = check_main(ctx, true);
            gv.holds = v.holds;
            gv.mu = std::move(v.witnesses);
            if (gv.holds) res.passing.push_back(g);
        }
        res.per_generator.push_back(std::move(gv));
    }
    res.exists_ideal = !res.passing.empty();
    return res;
}

RankReport estimate_kummer_rank(u64 p, u64 n, u32 trials) {
    if (trials == 0) throw std::invalid_argument("need at least one trial");
    RankReport rep;
    rep.p = p;
    rep.n = n;
    rep.trials_requested = trials;
    const bool skip_last = n == 2 * p;
    rep.width = static_cast<u32>(p - 2 - (skip_last ? 1 : 0));
    const u64 g = gcd_u64(n, p);
    if (n / g > UINT64_MAX / p) throw std::overflow_error("lcm(n, p) overflows 64 bits");
    const u64 L = n / g * p;

    std::vector<std::vector<u64>> basis;
    u64 ell = L + 1;
    u64 tested = 0;
    while (rep.trials_used < trials) {
        while (!is_prime_u64(ell)) {
            ell += L;
            if (++tested > 20000000) throw std::runtime_error("no auxiliary primes found");
        }
        const CycloParams params = frame_for_n(p, ell, n);
        const EmbeddingContext ctx = make_context(params, std::nullopt, 0);
        const EpsilonFamily fam = epsilon_family(ctx);
        const u64 mu1 = symbol(ctx, fam.eps[1]).mu;
        std::vector<u64> row;
        row.reserve(rep.width);
        for (u64 k = 2; k <= p - 1 - (skip_last ? 1 : 0); ++k)
            row.push_back(submod(symbol(ctx, fam.eps[k]).mu, mu1, p));
        rep.ells.push_back(ell);
        ++rep.trials_used;
        rank_add_row(basis, std::move(row), p);
        rep.rank = static_cast<u32>(basis.size());
        if (rep.rank == rep.width) {
            rep.saturated = true;
            break;
        }
        ell += L;
    }
    return rep;
}

BoundsReport bounds_report(u64 p, bool with_regularity) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("p must be an odd prime");
    BoundsReport rep;
    rep.p = p;
    const double deg = static_cast<double>(p) - 1.0;
    const double r2 = deg / 2.0;

    mpz_class disc;
    mpz_ui_pow_ui(disc.get_mpz_t(), p, static_cast<unsigned long>(p - 2));
    signed long e2 = 0;
    const double mant = mpz_get_d_2exp(&e2, disc.get_mpz_t());
    const double log_disc = std::log(mant) + static_cast<double>(e2) * std::log(2.0);
    rep.grh = 12.0 * log_disc * log_disc;

    const double log_disc_closed = (deg - 1.0) * std::log(static_cast<double>(p));
    rep.grh_simplified = 12.0 * log_disc_closed * log_disc_closed;

    rep.minkowski_log = std::lgamma(deg + 1.0) - deg * std::log(deg) +
                        r2 * std::log(4.0 / std::numbers::pi) + 0.5 * log_disc_closed;
    rep.minkowski = std::exp(rep.minkowski_log);

    if (with_regularity) {
        rep.irregular = irregular_indices(p);
        rep.regular = rep.irregular.empty();
        rep.regularity_computed = true;
    }
    return rep;
}

}  // namespace cyclosieve
