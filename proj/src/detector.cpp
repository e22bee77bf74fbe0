#include "collusion/detector.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace collusion {

const char* to_string(Fate fate) {
  switch (fate) {
    case Fate::collusive:
      return "collusive";
    case Fate::expanded:
      return "expanded";
    case Fate::discarded:
      return "discarded";
  }
  return "?";
}

namespace {

// Collusion indicators (gvs, gts, grs, gms) for a batch of groups.
using Scorer = std::function<std::vector<IndicatorReport>(std::span<const Biclique>)>;

std::vector<IndicatorReport> score_batch(std::span<const Biclique> groups,
                                         const SuspiciousnessTable& table, int max_tw) {
  std::vector<IndicatorReport> out(groups.size());
  const auto n = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = collusion_indicators(groups[i], table, max_tw);
  return out;
}

DetectionResult run_queue(const DetectionConfig& config, const CandidateSet& candidates,
                          const Scorer& score) {
  config.validate();
  DetectionResult result;
  result.config = config;

  auto cohort = CohortMaxima::of(candidates);
  auto& pool = result.examined;
  std::set<Biclique> seen(candidates.begin(), candidates.end());

  auto reports = score(candidates);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    finish_report(reports[i], candidates[i], cohort, config.weights);
    pool.push_back({candidates[i], reports[i], Fate::discarded, std::nullopt});
  }

  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < pool.size(); ++i) queue.push_back(i);

  while (!queue.empty()) {
    const auto idx = queue.front();
    queue.pop_front();
    const auto report = pool[idx].report;

    if (report.doc > config.delta) {
      pool[idx].fate = Fate::collusive;
      continue;
    }
    if (report.di < config.delta) {
      pool[idx].fate = Fate::discarded;
      continue;
    }
    pool[idx].fate = Fate::expanded;
    ++result.expanded_count;

    std::vector<Biclique> fresh;
    for (auto& sub : find_sub_bicliques(pool[idx].group, config)) {
      if (seen.insert(sub).second) fresh.push_back(std::move(sub));
    }
    if (fresh.empty()) continue;

    const auto before = cohort;
    for (const auto& g : fresh) cohort.include(g);
    if (cohort.reviewers != before.reviewers || cohort.products != before.products) {
      for (auto& s : pool) finish_report(s.report, s.group, cohort, config.weights);
    }
    auto sub_reports = score(fresh);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      finish_report(sub_reports[i], fresh[i], cohort, config.weights);
      queue.push_back(pool.size());
      pool.push_back({std::move(fresh[i]), sub_reports[i], Fate::discarded, idx});
    }
  }

  result.examined_count = pool.size();
  for (const auto& s : pool) {
    if (s.fate == Fate::collusive) result.collusive.push_back(s);
  }
  std::sort(result.collusive.begin(), result.collusive.end(),
            [](const ScoredGroup& a, const ScoredGroup& b) {
              if (a.report.doc != b.report.doc) return a.report.doc > b.report.doc;
              return a.group < b.group;
            });
  return result;
}

}  // namespace

DetectionResult detect(const RatingGraph& graph, const DetectionConfig& config) {
  config.validate();
  const auto candidates =
      enumerate_candidates(graph, config.min_r, config.min_p, config.candidate_cap);
  const auto table = build_suspiciousness(graph);
  return detect(graph, config, candidates, table);
}

DetectionResult detect(const RatingGraph& /*graph*/, const DetectionConfig& config,
                       const CandidateSet& candidates, const SuspiciousnessTable& table) {
  return run_queue(config, candidates, [&](std::span<const Biclique> groups) {
    return score_batch(groups, table, config.max_tw);
  });
}

bool shares_mining(const DetectionConfig& a, const DetectionConfig& b) {
  return a.min_r == b.min_r && a.min_p == b.min_p && a.max_tw == b.max_tw &&
         a.candidate_cap == b.candidate_cap && a.max_value == b.max_value;
}

DetectionResult redetect(const RatingGraph& graph, const DetectionConfig& config,
                         const DetectionResult& previous) {
  if (!shares_mining(previous.config, config)) return detect(graph, config);

  CandidateSet candidates;
  std::map<Biclique, IndicatorReport> known;
  for (const auto& s : previous.examined) {
    if (!s.parent) candidates.push_back(s.group);
    known.emplace(s.group, s.report);
  }

  std::optional<SuspiciousnessTable> table;
  return run_queue(config, candidates, [&](std::span<const Biclique> groups) {
    std::vector<IndicatorReport> out(groups.size());
    std::vector<Biclique> missing;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (auto it = known.find(groups[i]); it != known.end()) {
        out[i] = it->second;
      } else {
        missing.push_back(groups[i]);
        where.push_back(i);
      }
    }
    if (!missing.empty()) {
      if (!table) table = build_suspiciousness(graph);
      auto scored = score_batch(missing, *table, config.max_tw);
      for (std::size_t k = 0; k < missing.size(); ++k) out[where[k]] = scored[k];
    }
    return out;
  });
}

std::string ReportRow::label() const {
  if (collusive) return "collusive";
  if (damaging) return "damaging";
  return "-";
}

std::vector<ReportRow> rank_report(std::span<const ScoredGroup> groups, const RatingGraph& graph,
                                   double delta) {
  std::vector<ReportRow> rows;
  rows.reserve(groups.size());
  for (const auto& s : groups) {
    ReportRow row;
    row.rank = rows.size() + 1;
    row.doc = s.report.doc;
    row.di = s.report.di;
    row.collusive = s.report.doc > delta;
    row.damaging = s.report.di > delta;
    for (auto r : s.group.reviewers()) row.reviewers.push_back(graph.reviewer_id(r));
    for (auto p : s.group.products()) row.products.push_back(graph.product_id(p));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> rank_report(const DetectionResult& result, const RatingGraph& graph) {
  return rank_report(result.collusive, graph, result.config.delta);
}

}  // namespace collusion
