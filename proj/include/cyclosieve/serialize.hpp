#pragma once

#include <string>

#include "json.hpp"

#include "cyclosieve/survey.hpp"

namespace cyclosieve {

using ordered_json = nlohmann::ordered_json;

// values that can exceed 64 bits travel as decimal strings
std::string mpz_str(const mpz_class& v);

ordered_json to_json(const CycloParams& params);
ordered_json to_json(const CriterionVerdict& v);
ordered_json to_json(const AuditEntry& e);
ordered_json to_json(const ScanRecord& rec);
ordered_json to_json(const ScanAggregates& agg);
ordered_json to_json(const HypothesisResult& res);
ordered_json to_json(const RankReport& rep);
ordered_json to_json(const BoundsReport& rep);
ordered_json to_json(const ListComparison& cmp);

ScanAggregates aggregates_from_json(const ordered_json& j);

// the byte-exact record line contract shared by the CLI sink and the tests
std::string record_jsonl_line(const ScanRecord& rec);
std::string record_csv_header();
std::string record_csv_line(const ScanRecord& rec);

}  // namespace cyclosieve
