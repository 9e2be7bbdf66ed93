#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyclosieve/serialize.hpp"

using namespace cyclosieve;

namespace {

struct Output {
    std::string format = "human";  // json | jsonl | csv | human
};

void print_envelope(const Output& out, const ordered_json& payload) {
    ordered_json j;
    j["schema_version"] = 1;
    j["op"] = payload.at("op");
    for (const auto& [k, v] : payload.items())
        if (k != "op") j[k] = v;
    if (out.format == "jsonl")
        std::cout << j.dump() << "\n";
    else
        std::cout << j.dump(2) << "\n";
}

void print_kv(const std::string& k, const std::string& v) { std::cout << k << ": " << v << "\n"; }

void human_verdict(const CriterionVerdict& v) {
    print_kv("kind", kind_name(v.kind));
    print_kv("holds", v.holds ? "yes" : "no");
    std::string wit;
    for (const auto& [k, mu] : v.witnesses)
        wit += "mu(" + std::to_string(k) + ")=" + std::to_string(mu) + " ";
    if (!wit.empty()) print_kv("witnesses", wit);
    for (const auto& [k, val] : v.aux) print_kv(k, val);
}

PrincipalityPolicy parse_policy(const std::string& s) {
    if (s == "always") return PrincipalityPolicy::always;
    if (s == "never") return PrincipalityPolicy::never;
    return PrincipalityPolicy::regular;
}

bool policy_applicable(PrincipalityPolicy pol, u64 p) {
    switch (pol) {
        case PrincipalityPolicy::always: return true;
        case PrincipalityPolicy::never: return false;
        default: return is_regular_prime(p);
    }
}

std::vector<u64> parse_alpha(const std::string& s) {
    std::vector<u64> c;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw CLI::ValidationError("--alpha", "empty coefficient");
        c.push_back(std::stoull(tok));
    }
    if (c.empty()) throw CLI::ValidationError("--alpha", "no coefficients");
    return c;
}

// builds a context from p, q and either a (u, v) pair or an explicit n
struct ContextArgs {
    u64 p = 0, q = 0, n = 0;
    std::string u, v;  // decimal, possibly negative or > 64 bits
    u32 z_choice = 0;

    bool has_pair() const { return !u.empty() || !v.empty(); }

    std::pair<CycloParams, EmbeddingContext> build() const {
        if (has_pair()) {
            if (u.empty() || v.empty())
                throw CLI::ValidationError("--u/--v", "pair needs both u and v");
            const IntPair pair{mpz_class(u), mpz_class(v)};
            CycloParams params = attach_pair(p, q, pair);
            if (n != 0 && n != params.n)
                throw CLI::ValidationError("--n", "pair has n = " + std::to_string(params.n));
            return {params, make_context(params, pair, z_choice)};
        }
        if (n == 0) throw CLI::ValidationError("--n", "required without a (u, v) pair");
        CycloParams params = frame_for_n(p, q, n);
        return {params, make_context(params, std::nullopt, z_choice)};
    }
};

class FileRecordSink : public ScanSink {
  public:
    FileRecordSink(const std::string& path, bool csv, u64 start_bytes, bool fresh)
        : csv_(csv), bytes_(start_bytes) {
        if (fresh) {
            out_.open(path, std::ios::binary | std::ios::trunc);
            if (csv_) {
                const std::string h = record_csv_header();
                out_ << h;
                bytes_ += h.size();
            }
        } else {
            std::filesystem::resize_file(path, start_bytes);
            out_.open(path, std::ios::binary | std::ios::app);
        }
        if (!out_) throw std::runtime_error("cannot open records file: " + path);
    }
    void emit(const ScanRecord& rec) override {
        const std::string line = csv_ ? record_csv_line(rec) : record_jsonl_line(rec);
        out_ << line;
        bytes_ += line.size();
    }
    u64 bytes_written() const override { return bytes_; }
    void flush() override { out_.flush(); }

  private:
    std::ofstream out_;
    bool csv_;
    u64 bytes_ = 0;
};

class StdoutRecordSink : public ScanSink {
  public:
    explicit StdoutRecordSink(bool csv) : csv_(csv) {
        if (csv_) {
            const std::string h = record_csv_header();
            std::fwrite(h.data(), 1, h.size(), stdout);
            bytes_ += h.size();
        }
    }
    void emit(const ScanRecord& rec) override {
        const std::string line = csv_ ? record_csv_line(rec) : record_jsonl_line(rec);
        std::fwrite(line.data(), 1, line.size(), stdout);
        bytes_ += line.size();
    }
    u64 bytes_written() const override { return bytes_; }
    void flush() override { std::fflush(stdout); }

  private:
    bool csv_;
    u64 bytes_ = 0;
};

int run(int argc, char** argv) {
    CLI::App app{"power residue congruence survey for cyclotomic unit families"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "json, jsonl, csv or human")
        ->check(CLI::IsMember({"json", "jsonl", "csv", "human"}))
        ->capture_default_str();

    int exit_code = 0;

    // ---- cyclo ----
    auto* cyclo = app.add_subcommand("cyclo", "cyclotomic polynomial and order utilities");
    cyclo->require_subcommand(1);

    auto* phi = cyclo->add_subcommand("phi", "evaluate Phi_m(a) or the homogeneous Phi_m(a,b)");
    struct {
        u64 m = 0;
        std::string a, b = "1";
    } phi_args;
    phi->add_option("--m", phi_args.m, "cyclotomic index")->required();
    phi->add_option("--a", phi_args.a, "argument")->required();
    phi->add_option("--b", phi_args.b, "homogeneous second argument (default 1)");
    phi->callback([&] {
        const mpz_class val = phi_homogeneous(phi_args.m, mpz_class(phi_args.a), mpz_class(phi_args.b));
        if (out.format == "human" || out.format == "csv")
            std::cout << val.get_str() << "\n";
        else
            print_envelope(out, ordered_json{{"op", "cyclo-phi"},
                                             {"m", phi_args.m},
                                             {"a", phi_args.a},
                                             {"b", phi_args.b},
                                             {"value", val.get_str()}});
    });

    auto* ord = cyclo->add_subcommand("order", "multiplicative order of a mod a prime q");
    struct {
        std::string a;
        u64 q = 0;
    } ord_args;
    ord->add_option("--a", ord_args.a, "element")->required();
    ord->add_option("--q", ord_args.q, "prime modulus")->required();
    ord->callback([&] {
        const u64 o = mult_order(mpz_class(ord_args.a), ord_args.q);
        if (out.format == "human" || out.format == "csv")
            std::cout << o << "\n";
        else
            print_envelope(out, ordered_json{{"op", "cyclo-order"},
                                             {"a", ord_args.a},
                                             {"q", ord_args.q},
                                             {"order", o}});
    });

    // ---- symbol ----
    auto* sym = app.add_subcommand("symbol", "p-th power residue symbol exponent of alpha");
    ContextArgs sym_ctx;
    std::string sym_alpha;
    sym->add_option("--p", sym_ctx.p, "odd prime exponent")->required();
    sym->add_option("--q", sym_ctx.q, "residue characteristic")->required();
    sym->add_option("--n", sym_ctx.n, "order of xi (or derive from --u/--v)");
    sym->add_option("--u", sym_ctx.u, "pair component u");
    sym->add_option("--v", sym_ctx.v, "pair component v");
    sym->add_option("--z-choice", sym_ctx.z_choice, "which order-p root models zeta (0-based)");
    sym->add_option("--alpha", sym_alpha, "element as c0,c1,... in the residue field")->required();
    sym->callback([&] {
        auto [params, ctx] = sym_ctx.build();
        const std::vector<u64> coeffs = parse_alpha(sym_alpha);
        if (coeffs.size() > ctx.f_prime)
            throw CLI::ValidationError("--alpha", "field degree is " +
                                                      std::to_string(ctx.f_prime));
        const FieldElement alpha = ctx.field->from_coeffs(coeffs);
        const u64 mu = symbol(ctx, alpha).mu;
        if (out.format == "human" || out.format == "csv") {
            print_kv("f_prime", std::to_string(ctx.f_prime));
            print_kv("mu", std::to_string(mu));
        } else {
            print_envelope(out, ordered_json{{"op", "symbol"},
                                             {"params", to_json(params)},
                                             {"f_prime", ctx.f_prime},
                                             {"kappa_eff", mpz_str(ctx.kappa_eff)},
                                             {"z_choice", ctx.z_choice},
                                             {"alpha", coeffs},
                                             {"mu", mu}});
        }
    });

    // ---- criterion ----
    auto* crit = app.add_subcommand("criterion", "congruence criteria on one context");
    crit->require_subcommand(1);
    std::string policy_str = "regular";
    crit->add_option("--assume-p-principal", policy_str,
                     "when the principality hypothesis is granted")
        ->check(CLI::IsMember({"regular", "always", "never"}))
        ->capture_default_str();

    auto emit_verdict = [&](const char* op, const CycloParams& params, const CriterionVerdict& v) {
        const bool applicable = policy_applicable(parse_policy(policy_str), params.p);
        if (!v.holds && applicable) exit_code = 1;
        if (out.format == "human" || out.format == "csv") {
            human_verdict(v);
            print_kv("paper_applicable", applicable ? "yes" : "no");
        } else {
            print_envelope(out, ordered_json{{"op", op},
                                             {"params", to_json(params)},
                                             {"verdict", to_json(v)},
                                             {"paper_applicable", applicable}});
        }
    };

    auto* cmain = crit->add_subcommand("main", "all mu(eps_k) equal over the k-range");
    ContextArgs main_ctx;
    bool main_no_last = false;
    cmain->add_option("--p", main_ctx.p)->required();
    cmain->add_option("--q", main_ctx.q)->required();
    cmain->add_option("--n", main_ctx.n);
    cmain->add_option("--u", main_ctx.u);
    cmain->add_option("--v", main_ctx.v);
    cmain->add_option("--z-choice", main_ctx.z_choice);
    cmain->add_flag("--no-last", main_no_last, "stop the k-range at p-2");
    cmain->callback([&] {
        auto [params, ctx] = main_ctx.build();
        emit_verdict("criterion-main", params, check_main(ctx, !main_no_last));
    });

    auto* cspec = crit->add_subcommand("special", "degenerate-n clause bundles");
    ContextArgs spec_ctx;
    std::string case_str;
    cspec->add_option("--p", spec_ctx.p)->required();
    cspec->add_option("--q", spec_ctx.q)->required();
    cspec->add_option("--u", spec_ctx.u);
    cspec->add_option("--v", spec_ctx.v);
    cspec->add_option("--case", case_str, "n-p, n-1, n-2p or n-2")
        ->check(CLI::IsMember({"n-p", "n-1", "n-2p", "n-2"}));
    cspec->callback([&] {
        SpecialCase sc;
        u64 want_n = 0;
        if (spec_ctx.has_pair() && case_str.empty()) {
            // derive the case from the pair's n
            const IntPair pair{mpz_class(spec_ctx.u), mpz_class(spec_ctx.v)};
            const CycloParams probe = attach_pair(spec_ctx.p, spec_ctx.q, pair);
            want_n = probe.n;
        }
        if (case_str == "n-p" || want_n == spec_ctx.p) {
            sc = SpecialCase::n_p;
            spec_ctx.n = spec_ctx.p;
        } else if (case_str == "n-1" || want_n == 1) {
            sc = SpecialCase::n_1;
            spec_ctx.n = 1;
        } else if (case_str == "n-2p" || want_n == 2 * spec_ctx.p) {
            sc = SpecialCase::n_2p;
            spec_ctx.n = 2 * spec_ctx.p;
        } else if (case_str == "n-2" || want_n == 2) {
            sc = SpecialCase::n_2;
            spec_ctx.n = 2;
        } else {
            throw CLI::ValidationError("--case", "pair does not land in a special case; pass --case");
        }
        auto [params, ctx] = spec_ctx.build();
        emit_verdict("criterion-special", params, check_special(ctx, sc));
    });

    auto* ctwist = crit->add_subcommand("twisted", "mu_k - kappa k^m constant over k");
    ContextArgs twist_ctx;
    u64 twist_m = 1;
    ctwist->add_option("--p", twist_ctx.p)->required();
    ctwist->add_option("--q", twist_ctx.q)->required();
    ctwist->add_option("--n", twist_ctx.n);
    ctwist->add_option("--u", twist_ctx.u);
    ctwist->add_option("--v", twist_ctx.v);
    ctwist->add_option("--z-choice", twist_ctx.z_choice);
    ctwist->add_option("--m", twist_m, "twist exponent, >= 1 and prime to p")->required();
    ctwist->callback([&] {
        auto [params, ctx] = twist_ctx.build();
        emit_verdict("criterion-twisted", params, check_twisted(ctx, twist_m));
    });

    auto* caudit = crit->add_subcommand("audit", "run the applicable criterion for each q");
    struct {
        u64 p = 0;
        std::string u, v;
        std::vector<u64> qs;
    } audit_args;
    caudit->add_option("--p", audit_args.p)->required();
    caudit->add_option("--u", audit_args.u)->required();
    caudit->add_option("--v", audit_args.v)->required();
    caudit->add_option("--q", audit_args.qs, "primes to audit")->required()->delimiter(',');
    caudit->callback([&] {
        const IntPair pair{mpz_class(audit_args.u), mpz_class(audit_args.v)};
        const auto entries =
            audit_pair(audit_args.p, pair, audit_args.qs, parse_policy(policy_str));
        bool violated = false;
        for (const auto& e : entries)
            if (e.error.empty() && e.paper_applicable && !e.first_violation.empty())
                violated = true;
        if (violated) exit_code = 1;
        if (out.format == "human" || out.format == "csv") {
            for (const auto& e : entries) {
                if (!e.error.empty()) {
                    std::cout << "q=" << e.q << " skipped: " << e.error << "\n";
                    continue;
                }
                std::cout << "q=" << e.q << " n=" << e.params.n << " "
                          << kind_name(e.verdicts.front().kind) << " "
                          << (e.verdicts.front().holds ? "holds" : "violated");
                if (!e.first_violation.empty()) std::cout << " (" << e.first_violation << ")";
                std::cout << "\n";
            }
        } else {
            ordered_json arr = ordered_json::array();
            for (const auto& e : entries) arr.push_back(to_json(e));
            print_envelope(out, ordered_json{{"op", "criterion-audit"},
                                             {"p", audit_args.p},
                                             {"u", audit_args.u},
                                             {"v", audit_args.v},
                                             {"entries", std::move(arr)}});
        }
    });

    // ---- survey ----
    auto* survey = app.add_subcommand("survey", "statistical and tabulation runs");
    survey->require_subcommand(1);

    auto* seven = survey->add_subcommand("even-order", "primes q with even ord_p(q), q^f != 1 mod p^2");
    struct {
        u64 p = 0, bound = 0;
        std::string compare;
    } even_args;
    seven->add_option("--p", even_args.p)->required();
    seven->add_option("--bound", even_args.bound)->required();
    seven->add_option("--compare", even_args.compare, "'paper' diffs against the embedded 491 table")
        ->check(CLI::IsMember({"paper"}));
    seven->callback([&] {
        const std::vector<u64> qs = even_order_primes(even_args.p, even_args.bound);
        std::optional<ListComparison> cmp;
        if (even_args.compare == "paper") {
            if (even_args.p != 491)
                throw CLI::ValidationError("--compare", "the embedded table is for p = 491");
            cmp = compare_even_order_491();
        }
        if (out.format == "human" || out.format == "csv") {
            for (u64 q : qs) std::cout << q << "\n";
            if (cmp) {
                std::cout << "computed_only:";
                for (u64 q : cmp->computed_only) std::cout << " " << q;
                std::cout << "\npublished_only:";
                for (u64 q : cmp->published_only) std::cout << " " << q;
                std::cout << "\n";
            }
        } else {
            ordered_json j{{"op", "survey-even-order"},
                           {"p", even_args.p},
                           {"bound", even_args.bound},
                           {"count", qs.size()},
                           {"primes", qs}};
            if (cmp) j["compare"] = to_json(*cmp);
            print_envelope(out, std::move(j));
        }
    });

    auto* sscan = survey->add_subcommand("scan", "criterion satisfaction over a prime range");
    ScanOptions scan_opt;
    std::string scan_mode = "main", records_path;
    sscan->add_option("--p", scan_opt.p)->required();
    sscan->add_option("--qmin", scan_opt.q_min)->required();
    sscan->add_option("--qmax", scan_opt.q_max)->required();
    sscan->add_option("--mode", scan_mode, "main or special-auto")
        ->check(CLI::IsMember({"main", "special-auto"}))
        ->capture_default_str();
    sscan->add_flag("--fast-only", scan_opt.fast_only, "only q = 1 mod p (all contexts stay in F_q)");
    bool scan_no_last = false;
    sscan->add_flag("--no-last", scan_no_last, "main families stop at k = p-2");
    sscan->add_option("--workers", scan_opt.workers, "worker threads")
        ->envname("CYCLOSIEVE_WORKERS");
    sscan->add_option("--checkpoint", scan_opt.checkpoint_path, "checkpoint file (resume if present)");
    sscan->add_option("--checkpoint-every", scan_opt.checkpoint_every, "commits between checkpoints");
    sscan->add_option("--stop-after", scan_opt.stop_after, "stop cleanly after N primes (testing aid)");
    sscan->add_option("--records", records_path, "write per-context records to this file");
    sscan->callback([&] {
        scan_opt.mode = scan_mode == "special-auto" ? ScanMode::special_auto : ScanMode::main_only;
        scan_opt.include_last = !scan_no_last;
        if (!scan_opt.checkpoint_path.empty() && records_path.empty() && out.format != "human")
            throw CLI::ValidationError("--checkpoint", "checkpointed record streams need --records");

        std::optional<ScanCheckpoint> resume;
        if (!scan_opt.checkpoint_path.empty() &&
            std::filesystem::exists(scan_opt.checkpoint_path)) {
            ScanCheckpoint cp = load_checkpoint(scan_opt.checkpoint_path);
            cp.opt.workers = scan_opt.workers;
            cp.opt.checkpoint_every = scan_opt.checkpoint_every;
            cp.opt.checkpoint_path = scan_opt.checkpoint_path;
            cp.opt.stop_after = scan_opt.stop_after;
            resume = std::move(cp);
        }

        const bool csv = out.format == "csv";
        std::unique_ptr<ScanSink> sink;
        if (!records_path.empty()) {
            const bool fresh = !resume;
            if (!fresh && !std::filesystem::exists(records_path))
                throw std::runtime_error("resume needs the records file from the interrupted run");
            sink = std::make_unique<FileRecordSink>(records_path, csv,
                                                    fresh ? 0 : resume->records_bytes, fresh);
        } else if (out.format == "jsonl" || out.format == "csv") {
            sink = std::make_unique<StdoutRecordSink>(csv);
        }

        const ScanResult res = satisfaction_scan(scan_opt, sink.get(), resume);
        if (out.format == "human") {
            print_kv("primes_scanned", std::to_string(res.agg.primes_scanned));
            print_kv("contexts", std::to_string(res.agg.contexts));
            print_kv("family_pass/total", std::to_string(res.agg.family_pass) + "/" +
                                              std::to_string(res.agg.family_total));
            print_kv("single_pass/total", std::to_string(res.agg.single_pass) + "/" +
                                              std::to_string(res.agg.single_total));
            print_kv("special_pass/total", std::to_string(res.agg.special_pass) + "/" +
                                               std::to_string(res.agg.special_total));
            print_kv("last_q_done", std::to_string(res.last_q_done));
            print_kv("resumed", res.resumed ? "yes" : "no");
            print_kv("stopped_early", res.stopped_early ? "yes" : "no");
        } else if (out.format == "csv") {
            std::fflush(stdout);
        } else {
            print_envelope(out, ordered_json{{"op", "survey-scan"},
                                             {"aggregates", to_json(res.agg)},
                                             {"last_q_done", res.last_q_done},
                                             {"next_ordinal", res.next_ordinal},
                                             {"resumed", res.resumed},
                                             {"stopped_early", res.stopped_early}});
        }
    });

    auto* shyp = survey->add_subcommand("hypothesis", "does any generator xi satisfy the family?");
    struct {
        u64 p = 0, q = 0;
    } hyp_args;
    shyp->add_option("--p", hyp_args.p)->required();
    shyp->add_option("--q", hyp_args.q)->required();
    shyp->callback([&] {
        const HypothesisResult res = hypothesis_search(hyp_args.p, hyp_args.q);
        if (out.format == "human" || out.format == "csv") {
            print_kv("n", std::to_string(res.n));
            print_kv("generators", std::to_string(res.generator_count));
            std::string pass;
            for (u64 g : res.passing) pass += std::to_string(g) + " ";
            print_kv("passing", pass.empty() ? "(none)" : pass);
            print_kv("exists_ideal", res.exists_ideal ? "yes" : "no");
        } else {
            print_envelope(out, ordered_json{{"op", "survey-hypothesis"},
                                             {"result", to_json(res)}});
        }
    });

    auto* srank = survey->add_subcommand("rank", "F_p-rank of symbol difference vectors");
    struct {
        u64 p = 0, n = 0;
        u32 trials = 25;
    } rank_args;
    srank->add_option("--p", rank_args.p)->required();
    srank->add_option("--n", rank_args.n)->required();
    srank->add_option("--trials", rank_args.trials)->capture_default_str();
    srank->callback([&] {
        const RankReport rep = estimate_kummer_rank(rank_args.p, rank_args.n, rank_args.trials);
        if (out.format == "human" || out.format == "csv") {
            print_kv("width", std::to_string(rep.width));
            print_kv("rank", std::to_string(rep.rank));
            print_kv("trials_used", std::to_string(rep.trials_used));
            print_kv("saturated", rep.saturated ? "yes" : "no");
        } else {
            print_envelope(out, ordered_json{{"op", "survey-rank"}, {"report", to_json(rep)}});
        }
    });

    // ---- bounds ----
    auto* bounds = app.add_subcommand("bounds", "class-number-related bounds for p");
    struct {
        u64 p = 0;
        bool skip_regularity = false;
    } bounds_args;
    bounds->add_option("--p", bounds_args.p)->required();
    bounds->add_flag("--skip-regularity", bounds_args.skip_regularity,
                     "omit the Bernoulli regularity pass");
    bounds->callback([&] {
        const BoundsReport rep = bounds_report(bounds_args.p, !bounds_args.skip_regularity);
        if (out.format == "human" || out.format == "csv") {
            print_kv("minkowski", std::to_string(rep.minkowski));
            print_kv("grh", std::to_string(rep.grh));
            print_kv("grh_simplified", std::to_string(rep.grh_simplified));
            if (rep.regularity_computed) {
                print_kv("regular", rep.regular ? "yes" : "no");
                std::string idx;
                for (u64 m : rep.irregular) idx += std::to_string(m) + " ";
                if (!idx.empty()) print_kv("irregular_indices", idx);
            }
        } else {
            print_envelope(out, ordered_json{{"op", "bounds"}, {"report", to_json(rep)}});
        }
    });

    // --format and --assume-p-principal live on parents; let leaves hand them up
    const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
