#include "collusion/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "collusion/detector.hpp"
#include "collusion/error.hpp"
#include "collusion/indicators.hpp"
#include "collusion/mining.hpp"

namespace collusion::synth {

void AttackScript::validate() const {
  if (group_size < 2) throw InfeasibleScript("attack group_size must be >= 2");
  if (target_count < 3) throw InfeasibleScript("attack target_count must be >= 3");
  if (time_span_days < 0) throw InfeasibleScript("attack span must be >= 0");
  if (!(duplicate_rate >= 0.0 && duplicate_rate <= 1.0)) {
    throw InfeasibleScript("attack dup rate outside [0, 1]");
  }
  if (!(camouflage_rate >= 0.0 && camouflage_rate <= 1.0)) {
    throw InfeasibleScript("attack camo rate outside [0, 1]");
  }
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("attack: bad value '{}' for {}", text, key));
  }
  return v;
}

}  // namespace

AttackScript parse_attack(std::string_view spec) {
  AttackScript a;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    auto item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("attack: expected key=value, got '{}'", item));
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "size") {
      a.group_size = parse_number<std::size_t>(value, key);
    } else if (key == "targets") {
      a.target_count = parse_number<std::size_t>(value, key);
    } else if (key == "mode") {
      if (value == "promote") {
        a.mode = ValueMode::promote;
      } else if (value == "demote") {
        a.mode = ValueMode::demote;
      } else {
        throw ConfigError(fmt::format("attack: mode must be promote or demote, got '{}'", value));
      }
    } else if (key == "span") {
      a.time_span_days = parse_number<int>(value, key);
    } else if (key == "dup") {
      a.duplicate_rate = parse_number<double>(value, key);
    } else if (key == "camo") {
      a.camouflage_rate = parse_number<double>(value, key);
    } else {
      throw ConfigError(fmt::format("attack: unknown key '{}'", key));
    }
  }
  return a;
}

LabeledDataset generate(const GeneratorOptions& options, std::span<const AttackScript> attacks,
                        std::uint64_t seed) {
  if (!(options.density > 0.0 && options.density <= 1.0)) {
    throw ConfigError("density must lie in (0, 1]");
  }
  if (options.days <= 0) throw ConfigError("days must be > 0");
  for (const auto& a : attacks) {
    a.validate();
    if (a.target_count > options.products) {
      throw InfeasibleScript(fmt::format("attack needs {} targets but only {} products exist",
                                         a.target_count, options.products));
    }
    if (a.time_span_days >= options.days) throw InfeasibleScript("attack span exceeds the timeline");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> quality_dist(1.0, options.max_value);
  std::normal_distribution<double> noise(0.0, options.noise_sigma);
  std::uniform_int_distribution<int> any_day(0, options.days - 1);

  const auto width = [](std::size_t n) { return fmt::format("{}", n > 0 ? n - 1 : 0).size(); };
  std::vector<ProductId> products;
  for (std::size_t j = 0; j < options.products; ++j) {
    products.push_back(fmt::format("p{:0{}}", j, width(options.products)));
  }
  std::vector<double> quality(options.products);
  for (auto& q : quality) q = quality_dist(rng);

  auto honest_value = [&](std::size_t product) {
    const double v = std::round(quality[product] + noise(rng));
    return std::clamp(v, 1.0, options.max_value);
  };
  auto day = [&](int offset) { return options.start + std::chrono::days{offset}; };

  LabeledDataset ds;
  for (std::size_t i = 0; i < options.honest_reviewers; ++i) {
    const auto id = fmt::format("h{:0{}}", i, width(options.honest_reviewers));
    for (std::size_t j = 0; j < options.products; ++j) {
      if (unit(rng) < options.density) {
        const double v = honest_value(j);
        ds.raw.push_back({id, products[j], v, day(any_day(rng))});
      }
    }
  }

  for (std::size_t a = 0; a < attacks.size(); ++a) {
    const auto& script = attacks[a];
    std::vector<std::size_t> order(options.products);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> targets(order.begin(),
                                     order.begin() + static_cast<std::ptrdiff_t>(script.target_count));
    std::vector<std::size_t> others(order.begin() + static_cast<std::ptrdiff_t>(script.target_count),
                                    order.end());

    const double value = script.mode == ValueMode::promote ? options.max_value : 1.0;
    const int base = std::uniform_int_distribution<int>(0, options.days - 1 - script.time_span_days)(rng);
    std::uniform_int_distribution<int> within(0, script.time_span_days);
    const auto camo = static_cast<std::size_t>(
        std::llround(script.camouflage_rate * static_cast<double>(script.target_count)));

    TruthGroup truth;
    for (std::size_t k = 0; k < script.group_size; ++k) {
      const auto id = fmt::format("c{:02}_{:02}", a, k);
      truth.reviewers.push_back(id);
      for (auto j : targets) {
        const int t = base + within(rng);
        if (unit(rng) < script.duplicate_rate) {
          // two earlier copies inside the attack window, then the final vote
          for (int c = 0; c < 2; ++c) {
            ds.raw.push_back({id, products[j], value, day(base + within(rng) % (t - base + 1))});
          }
        }
        ds.raw.push_back({id, products[j], value, day(t)});
      }
      std::shuffle(others.begin(), others.end(), rng);
      for (std::size_t c = 0; c < std::min(camo, others.size()); ++c) {
        const auto j = others[c];
        const double v = honest_value(j);
        ds.raw.push_back({id, products[j], v, day(any_day(rng))});
      }
    }
    for (auto j : targets) truth.products.push_back(products[j]);
    std::sort(truth.reviewers.begin(), truth.reviewers.end());
    std::sort(truth.products.begin(), truth.products.end());
    ds.truth.push_back(std::move(truth));
  }
  return ds;
}

void write_csv(std::ostream& out, std::span<const RawRating> raw) {
  out << "reviewer,product,value,date\n";
  for (const auto& r : raw) {
    out << fmt::format("{},{},{},{}\n", r.reviewer, r.product, r.value, format_date(r.date));
  }
}

void write_truth(std::ostream& out, std::span<const TruthGroup> truth) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& g : truth) {
    nlohmann::ordered_json o;
    o["reviewers"] = g.reviewers;
    o["products"] = g.products;
    j.push_back(std::move(o));
  }
  out << j.dump(2) << '\n';
}

std::vector<TruthGroup> read_truth(std::istream& in) {
  std::vector<TruthGroup> out;
  try {
    auto j = nlohmann::json::parse(in);
    for (const auto& o : j) {
      TruthGroup g{o.at("reviewers").get<std::vector<std::string>>(),
                   o.at("products").get<std::vector<std::string>>()};
      std::sort(g.reviewers.begin(), g.reviewers.end());
      std::sort(g.products.begin(), g.products.end());
      out.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(0, std::string("bad truth file: ") + ex.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
std::size_t intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

}  // namespace

bool matches(const TruthGroup& retrieved, const TruthGroup& truth, const MatchRule& rule) {
  if (retrieved.reviewers == truth.reviewers && retrieved.products == truth.products) return true;
  const auto common = intersection_size(retrieved.reviewers, truth.reviewers);
  const auto together = retrieved.reviewers.size() + truth.reviewers.size() - common;
  if (together == 0) return false;
  const double jaccard = static_cast<double>(common) / static_cast<double>(together);
  return jaccard >= rule.min_jaccard && intersection_size(retrieved.products, truth.products) > 0;
}

Metric precision(std::span<const TruthGroup> retrieved, std::span<const TruthGroup> truth,
                 const MatchRule& rule) {
  if (retrieved.empty()) return {1.0, true};
  std::size_t hits = 0;
  for (const auto& r : retrieved) {
    hits += std::any_of(truth.begin(), truth.end(), [&](const auto& t) { return matches(r, t, rule); });
  }
  return {static_cast<double>(hits) / static_cast<double>(retrieved.size()), false};
}

Metric recall(std::span<const TruthGroup> retrieved, std::span<const TruthGroup> truth,
              const MatchRule& rule) {
  if (truth.empty()) return {1.0, true};
  std::size_t hits = 0;
  for (const auto& t : truth) {
    hits += std::any_of(retrieved.begin(), retrieved.end(),
                        [&](const auto& r) { return matches(r, t, rule); });
  }
  return {static_cast<double>(hits) / static_cast<double>(truth.size()), false};
}

TruthGroup describe(const Biclique& group, const RatingGraph& graph) {
  TruthGroup g;
  for (auto r : group.reviewers()) g.reviewers.push_back(graph.reviewer_id(r));
  for (auto p : group.products()) g.products.push_back(graph.product_id(p));
  return g;
}

std::vector<SweepPoint> threshold_sweep(const LabeledDataset& dataset, const DetectionConfig& config,
                                        std::span<const double> deltas, const MatchRule& rule) {
  config.validate();
  if (!std::is_sorted(deltas.begin(), deltas.end())) {
    throw ConfigError("sweep deltas must be ascending");
  }
  const auto graph = build_graph(dataset.raw, {config.prune_reviewer_min, config.prune_product_min,
                                               config.max_value});
  const auto candidates =
      enumerate_candidates(graph, config.min_r, config.min_p, config.candidate_cap);
  const auto table = build_suspiciousness(graph);

  std::vector<SweepPoint> points;
  for (double delta : deltas) {
    auto cfg = config;
    cfg.delta = delta;
    const auto result = detect(graph, cfg, candidates, table);
    std::vector<TruthGroup> retrieved;
    for (const auto& s : result.collusive) retrieved.push_back(describe(s.group, graph));
    points.push_back({delta, retrieved.size(), precision(retrieved, dataset.truth, rule),
                      recall(retrieved, dataset.truth, rule)});
  }
  return points;
}

std::vector<double> parse_deltas(std::string_view spec) {
  std::vector<double> out;
  auto number = [](std::string_view s) { return parse_number<double>(s, "deltas"); };
  if (spec.find(':') != std::string_view::npos) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("deltas: want lo:hi:step");
    const double lo = number(spec.substr(0, a));
    const double hi = number(spec.substr(a + 1, b - a - 1));
    const double step = number(spec.substr(b + 1));
    if (!(step > 0.0) || hi < lo) throw ConfigError("deltas: need lo <= hi and step > 0");
    for (std::size_t i = 0;; ++i) {
      const double v = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
      if (v > hi + 1e-9) break;
      out.push_back(std::min(v, 1.0));
    }
  } else {
    while (!spec.empty()) {
      const auto comma = spec.find(',');
      out.push_back(number(spec.substr(0, comma)));
      spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    }
    std::sort(out.begin(), out.end());
  }
  for (double d : out) {
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(fmt::format("delta {} outside [0, 1]", d));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "delta,retrieved,precision,recall,precision_vacuous,recall_vacuous\n";
  for (const auto& p : points) {
    out << fmt::format("{},{},{},{},{},{}\n", p.delta, p.retrieved, p.precision.value,
                       p.recall.value, p.precision.vacuous ? 1 : 0, p.recall.vacuous ? 1 : 0);
  }
}

std::vector<CumulativePoint> cumulative_distribution(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<CumulativePoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({values[i], 100.0 * static_cast<double>(i + 1) / static_cast<double>(values.size())});
  }
  return out;
}

}  // namespace collusion::synth
