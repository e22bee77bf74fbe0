#include "collusion/result_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "collusion/error.hpp"

namespace collusion {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json config_to_json(const DetectionConfig& c) {
  ordered_json j;
  j["min_r"] = c.min_r;
  j["min_p"] = c.min_p;
  j["max_tw"] = c.max_tw;
  j["delta"] = c.delta;
  j["weights"] = {c.weights.value, c.weights.time, c.weights.spam, c.weights.member};
  j["prune_reviewer_min"] = c.prune_reviewer_min;
  j["prune_product_min"] = c.prune_product_min;
  j["max_value"] = c.max_value;
  j["candidate_cap"] = c.candidate_cap;
  return j;
}

DetectionConfig config_from_json(const json& j, DetectionConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("config")) return config_from_json(j.at("config"), base);
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "min_r") {
        base.min_r = v.get<std::size_t>();
      } else if (key == "min_p") {
        base.min_p = v.get<std::size_t>();
      } else if (key == "max_tw") {
        base.max_tw = v.get<int>();
      } else if (key == "delta") {
        base.delta = v.get<double>();
      } else if (key == "weights") {
        auto w = v.get<std::vector<double>>();
        if (w.size() != 4) throw ConfigError("weights needs exactly four entries");
        base.weights = {w[0], w[1], w[2], w[3]};
      } else if (key == "prune_reviewer_min") {
        base.prune_reviewer_min = v.get<std::size_t>();
      } else if (key == "prune_product_min") {
        base.prune_product_min = v.get<std::size_t>();
      } else if (key == "max_value") {
        base.max_value = v.get<double>();
      } else if (key == "candidate_cap") {
        base.candidate_cap = v.get<std::size_t>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad config value: ") + ex.what());
  }
  return base;
}

DetectionConfig load_config(const std::string& path, DetectionConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError("config " + path + ": " + ex.what());
  }
  return config_from_json(j, base);
}

ordered_json report_to_json(const IndicatorReport& r) {
  ordered_json j;
  j["gvs"] = r.gvs;
  j["gts"] = r.gts;
  j["grs"] = r.grs;
  j["gms"] = r.gms;
  j["gs"] = r.gs;
  j["gps"] = r.gps;
  j["doc"] = r.doc;
  j["di"] = r.di;
  return j;
}

IndicatorReport report_from_json(const json& j) {
  IndicatorReport r;
  r.gvs = j.at("gvs").get<double>();
  r.gts = j.at("gts").get<double>();
  r.grs = j.at("grs").get<double>();
  r.gms = j.at("gms").get<double>();
  r.gs = j.at("gs").get<double>();
  r.gps = j.at("gps").get<double>();
  r.doc = j.at("doc").get<double>();
  r.di = j.at("di").get<double>();
  return r;
}

ordered_json group_to_json(const Biclique& group, const RatingGraph& graph) {
  ordered_json j;
  auto& rs = j["reviewers"] = ordered_json::array();
  for (auto r : group.reviewers()) rs.push_back(graph.reviewer_id(r));
  auto& ps = j["products"] = ordered_json::array();
  for (auto p : group.products()) ps.push_back(graph.product_id(p));
  return j;
}

Biclique group_from_json(const json& j, const RatingGraph& graph) {
  auto rs = j.at("reviewers").get<std::vector<std::string>>();
  auto ps = j.at("products").get<std::vector<std::string>>();
  return Biclique::from_ids(graph, rs, ps);
}

namespace {

ordered_json scored_to_json(const ScoredGroup& s, const RatingGraph& graph) {
  auto j = group_to_json(s.group, graph);
  const auto report = report_to_json(s.report);
  for (const auto& [k, v] : report.items()) j[k] = v;
  j["fate"] = to_string(s.fate);
  if (s.parent) j["parent"] = *s.parent;
  return j;
}

Fate fate_from_string(const std::string& s) {
  if (s == "collusive") return Fate::collusive;
  if (s == "expanded") return Fate::expanded;
  if (s == "discarded") return Fate::discarded;
  throw ParseError(0, "unknown fate " + s);
}

ScoredGroup scored_from_json(const json& j, const RatingGraph& graph) {
  ScoredGroup s{group_from_json(j, graph), report_from_json(j), Fate::discarded, std::nullopt};
  if (j.contains("fate")) s.fate = fate_from_string(j.at("fate").get<std::string>());
  if (j.contains("parent")) s.parent = j.at("parent").get<std::size_t>();
  return s;
}

}  // namespace

void write_result(std::ostream& out, const DetectionResult& result, const RatingGraph& graph) {
  ordered_json j;
  j["config"] = config_to_json(result.config);
  j["examined_count"] = result.examined_count;
  j["expanded_count"] = result.expanded_count;
  auto& col = j["collusive"] = ordered_json::array();
  for (const auto& s : result.collusive) col.push_back(scored_to_json(s, graph));
  auto& ex = j["examined"] = ordered_json::array();
  for (const auto& s : result.examined) ex.push_back(scored_to_json(s, graph));
  out << j.dump(2) << '\n';
}

DetectionResult read_result(std::istream& in, const RatingGraph& graph) {
  DetectionResult r;
  try {
    auto j = json::parse(in);
    r.config = config_from_json(j.at("config"));
    r.examined_count = j.at("examined_count").get<std::size_t>();
    r.expanded_count = j.at("expanded_count").get<std::size_t>();
    for (const auto& g : j.at("collusive")) r.collusive.push_back(scored_from_json(g, graph));
    for (const auto& g : j.at("examined")) r.examined.push_back(scored_from_json(g, graph));
  } catch (const json::exception& ex) {
    throw ParseError(0, std::string("bad detection result: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ParseError(0, std::string("result does not match graph: ") + ex.what());
  } catch (const MissingEdge& ex) {
    throw ParseError(0, std::string("result does not match graph: ") + ex.what());
  }
  return r;
}

void write_candidates(std::ostream& out, const CandidateSet& candidates, const RatingGraph& graph) {
  for (const auto& c : candidates) out << group_to_json(c, graph).dump() << '\n';
}

CandidateSet read_candidates(std::istream& in, const RatingGraph& graph) {
  CandidateSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(group_from_json(json::parse(line), graph));
    } catch (const json::exception& ex) {
      throw ParseError(line_no, ex.what());
    } catch (const std::invalid_argument& ex) {
      throw ParseError(line_no, ex.what());
    } catch (const MissingEdge& ex) {
      throw ParseError(line_no, ex.what());
    }
  }
  return out;
}

void write_scored(std::ostream& out, const std::vector<ScoredGroup>& groups,
                  const RatingGraph& graph) {
  for (const auto& s : groups) {
    auto j = group_to_json(s.group, graph);
    const auto report = report_to_json(s.report);
    for (const auto& [k, v] : report.items()) j[k] = v;
    out << j.dump() << '\n';
  }
}

std::vector<ScoredRecord> read_scored(std::istream& in) {
  std::vector<ScoredRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      out.push_back({j.at("reviewers").get<std::vector<std::string>>(),
                     j.at("products").get<std::vector<std::string>>(), report_from_json(j)});
    } catch (const json::exception& ex) {
      throw ParseError(line_no, ex.what());
    }
  }
  return out;
}

}  // namespace collusion
