#include "cyclosieve/serialize.hpp"

namespace cyclosieve {

std::string mpz_str(const mpz_class& v) { return v.get_str(); }

ordered_json to_json(const CycloParams& params) {
    return ordered_json{{"p", params.p},         {"q", params.q},
                        {"f", params.f},         {"kappa", mpz_str(params.kappa)},
                        {"n", params.n},         {"d", params.d},
                        {"r", params.r},         {"phi_checked", params.phi_checked}};
}

ordered_json to_json(const CriterionVerdict& v) {
    ordered_json wit = ordered_json::array();
    for (const auto& [k, mu] : v.witnesses) wit.push_back(ordered_json::array({k, mu}));
    ordered_json aux = ordered_json::object();
    for (const auto& [key, val] : v.aux) aux[key] = val;
    return ordered_json{
        {"kind", kind_name(v.kind)}, {"holds", v.holds}, {"witnesses", std::move(wit)},
        {"aux", std::move(aux)}};
}

ordered_json to_json(const AuditEntry& e) {
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : e.verdicts) verdicts.push_back(to_json(v));
    ordered_json j{{"q", e.q}};
    if (e.error.empty()) {
        j["params"] = to_json(e.params);
        j["verdicts"] = std::move(verdicts);
        j["paper_applicable"] = e.paper_applicable;
        j["first_violation"] = e.first_violation;
    }
    j["error"] = e.error;
    return j;
}

ordered_json to_json(const ScanRecord& rec) {
    return ordered_json{{"p", rec.p},
                        {"q", rec.q},
                        {"n", rec.n},
                        {"kind", kind_name(rec.kind)},
                        {"holds", rec.holds},
                        {"pass_count", rec.pass_count},
                        {"pass_total", rec.pass_total},
                        {"ordinal", rec.ordinal}};
}

ordered_json to_json(const ScanAggregates& agg) {
    ordered_json per_n = ordered_json::object();
    for (const auto& [n, fp] : agg.per_n)
        per_n[std::to_string(n)] = ordered_json::array({fp.first, fp.second});
    return ordered_json{{"primes_scanned", agg.primes_scanned},
                        {"contexts", agg.contexts},
                        {"family_total", agg.family_total},
                        {"family_pass", agg.family_pass},
                        {"single_total", agg.single_total},
                        {"single_pass", agg.single_pass},
                        {"special_total", agg.special_total},
                        {"special_pass", agg.special_pass},
                        {"per_n", std::move(per_n)}};
}

ScanAggregates aggregates_from_json(const ordered_json& j) {
    ScanAggregates a;
    a.primes_scanned = j.at("primes_scanned").get<u64>();
    a.contexts = j.at("contexts").get<u64>();
    a.family_total = j.at("family_total").get<u64>();
    a.family_pass = j.at("family_pass").get<u64>();
    a.single_total = j.at("single_total").get<u64>();
    a.single_pass = j.at("single_pass").get<u64>();
    a.special_total = j.at("special_total").get<u64>();
    a.special_pass = j.at("special_pass").get<u64>();
    for (const auto& [key, val] : j.at("per_n").items())
        a.per_n[std::stoull(key)] = {val.at(0).get<u64>(), val.at(1).get<u64>()};
    return a;
}

ordered_json to_json(const HypothesisResult& res) {
    ordered_json gens = ordered_json::array();
    for (const auto& gv : res.per_generator) {
        ordered_json mu = ordered_json::array();
        for (const auto& [k, m] : gv.mu) mu.push_back(ordered_json::array({k, m}));
        gens.push_back(ordered_json{
            {"g", gv.g}, {"holds", gv.holds}, {"note", gv.note}, {"mu", std::move(mu)}});
    }
    return ordered_json{{"p", res.p},
                        {"q", res.q},
                        {"n", res.n},
                        {"generator_count", res.generator_count},
                        {"exists_ideal", res.exists_ideal},
                        {"passing", res.passing},
                        {"per_generator", std::move(gens)}};
}

ordered_json to_json(const RankReport& rep) {
    return ordered_json{{"p", rep.p},
                        {"n", rep.n},
                        {"width", rep.width},
                        {"trials_requested", rep.trials_requested},
                        {"trials_used", rep.trials_used},
                        {"rank", rep.rank},
                        {"saturated", rep.saturated},
                        {"ells", rep.ells}};
}

ordered_json to_json(const BoundsReport& rep) {
    return ordered_json{{"p", rep.p},
                        {"minkowski", rep.minkowski},
                        {"minkowski_log", rep.minkowski_log},
                        {"grh", rep.grh},
                        {"grh_simplified", rep.grh_simplified},
                        {"regularity_computed", rep.regularity_computed},
                        {"regular", rep.regular},
                        {"irregular", rep.irregular}};
}

ordered_json to_json(const ListComparison& cmp) {
    return ordered_json{{"computed_only", cmp.computed_only},
                        {"published_only", cmp.published_only},
                        {"match_after_dedup", cmp.computed_only.empty() && cmp.published_only.empty()}};
}

std::string record_jsonl_line(const ScanRecord& rec) { return to_json(rec).dump() + "\n"; }

std::string record_csv_header() { return "p,q,n,kind,holds,pass_count,pass_total,ordinal\n"; }

std::string record_csv_line(const ScanRecord& rec) {
    std::string s;
    s += std::to_string(rec.p);
    s += ',';
    s += std::to_string(rec.q);
    s += ',';
    s += std::to_string(rec.n);
    s += ',';
    s += kind_name(rec.kind);
    s += ',';
    s += rec.holds ? "true" : "false";
    s += ',';
    s += std::to_string(rec.pass_count);
    s += ',';
    s += std::to_string(rec.pass_total);
    s += ',';
    s += std::to_string(rec.ordinal);
    s += '\n';
    return s;
}

}  // namespace cyclosieve
