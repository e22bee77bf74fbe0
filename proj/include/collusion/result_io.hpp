#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "collusion/config.hpp"
#include "collusion/detector.hpp"
#include "collusion/model.hpp"

namespace collusion {

// JSON shapes shared by the CLI subcommands. The config object written inside
// a detection result is also accepted as a config file, so a past run can be
// replayed.

nlohmann::ordered_json config_to_json(const DetectionConfig& config);

/// Overlays the fields present in `j` on `base`. Accepts either a bare config
/// object or a detection result carrying one under "config". Unknown keys are
/// rejected with ConfigError.
DetectionConfig config_from_json(const nlohmann::json& j, DetectionConfig base = {});
DetectionConfig load_config(const std::string& path, DetectionConfig base = {});

nlohmann::ordered_json report_to_json(const IndicatorReport& report);
IndicatorReport report_from_json(const nlohmann::json& j);

/// {"reviewers":[...],"products":[...]}
nlohmann::ordered_json group_to_json(const Biclique& group, const RatingGraph& graph);
Biclique group_from_json(const nlohmann::json& j, const RatingGraph& graph);

void write_result(std::ostream& out, const DetectionResult& result, const RatingGraph& graph);
DetectionResult read_result(std::istream& in, const RatingGraph& graph);

/// One group per line.
void write_candidates(std::ostream& out, const CandidateSet& candidates, const RatingGraph& graph);
CandidateSet read_candidates(std::istream& in, const RatingGraph& graph);

/// A scored group as it appears in scored.jsonl; ids only, no graph needed.
struct ScoredRecord {
  std::vector<ReviewerId> reviewers;
  std::vector<ProductId> products;
  IndicatorReport report;
};

void write_scored(std::ostream& out, const std::vector<ScoredGroup>& groups,
                  const RatingGraph& graph);
std::vector<ScoredRecord> read_scored(std::istream& in);

}  // namespace collusion
