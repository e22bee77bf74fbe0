#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collusion/config.hpp"
#include "collusion/indicators.hpp"
#include "collusion/mining.hpp"
#include "collusion/model.hpp"

namespace collusion {

/// What the detection loop decided for a group.
enum class Fate {
  collusive,  // DOC > delta
  expanded,   // DOC <= delta, DI >= delta: searched for sub-groups
  discarded,  // DOC <= delta, DI < delta
};

const char* to_string(Fate fate);

struct ScoredGroup {
  Biclique group;
  IndicatorReport report;
  Fate fate = Fate::discarded;
  /// Position in DetectionResult::examined of the group this one was carved
  /// out of; empty for mined candidates.
  std::optional<std::size_t> parent;

  friend bool operator==(const ScoredGroup&, const ScoredGroup&) = default;
};

struct DetectionResult {
  /// Collusive groups, by descending DOC then canonical identity.
  std::vector<ScoredGroup> collusive;
  /// Every group the loop scored, in processing order. Queries re-weight
  /// these without re-mining.
  std::vector<ScoredGroup> examined;
  std::size_t examined_count = 0;
  std::size_t expanded_count = 0;
  DetectionConfig config;
};

/// Mine candidates, score them, and run the work queue: DOC > delta is
/// collusive, DI < delta is dropped, anything else is expanded into
/// sub-groups that join the queue. A canonical identity is queued at most
/// once. GS/GPS are normalised over every group ever queued; scores are
/// refreshed whenever those maxima grow.
DetectionResult detect(const RatingGraph& graph, const DetectionConfig& config = {});

/// Same loop over already-mined candidates and a precomputed suspiciousness
/// table, so a threshold sweep can mine once.
DetectionResult detect(const RatingGraph& graph, const DetectionConfig& config,
                       const CandidateSet& candidates, const SuspiciousnessTable& table);

/// True when two configs mine the same candidates and compute the same
/// collusion indicators (they may differ in delta and weights).
bool shares_mining(const DetectionConfig& a, const DetectionConfig& b);

/// Detection under `config`, reusing the candidates and collusion indicators
/// of `previous` instead of mining again. Only sub-groups `previous` never
/// scored are computed. Same result as detect(graph, config) when `previous`
/// came from the same graph; falls back to detect when the configs do not
/// share mining.
DetectionResult redetect(const RatingGraph& graph, const DetectionConfig& config,
                         const DetectionResult& previous);

struct ReportRow {
  std::size_t rank = 0;  // 1-based
  double doc = 0.0;
  double di = 0.0;
  bool collusive = false;  // DOC > delta
  bool damaging = false;   // DI > delta
  std::vector<ReviewerId> reviewers;
  std::vector<ProductId> products;

  bool dangerous() const { return collusive || damaging; }
  /// "collusive", "damaging" (high DI only) or "-".
  std::string label() const;
};

/// Rows in the order given. A group is dangerous when either DOC or DI is
/// above delta.
std::vector<ReportRow> rank_report(std::span<const ScoredGroup> groups, const RatingGraph& graph,
                                   double delta);
std::vector<ReportRow> rank_report(const DetectionResult& result, const RatingGraph& graph);

}  // namespace collusion
