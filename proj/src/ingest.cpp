#include "collusion/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <set>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "collusion/error.hpp"

namespace collusion {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

RawRating parse_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 4) {
    throw std::invalid_argument(fmt::format("expected 4 fields, found {}", fields.size()));
  }
  RawRating r;
  r.reviewer = std::string(fields[0]);
  r.product = std::string(fields[1]);
  if (!parse_double(fields[2], r.value)) throw std::invalid_argument("bad rating value");
  auto date = parse_date(fields[3]);
  if (!date) throw std::invalid_argument("bad date (want yyyy-mm-dd)");
  r.date = *date;
  return r;
}

RawRating parse_json_line(std::string_view line) {
  auto j = nlohmann::json::parse(line);
  RawRating r;
  r.reviewer = j.at("reviewer").get<std::string>();
  r.product = j.at("product").get<std::string>();
  const auto& v = j.at("value");
  if (v.is_number()) {
    r.value = v.get<double>();
  } else if (!v.is_string() || !parse_double(v.get<std::string>(), r.value)) {
    throw std::invalid_argument("bad rating value");
  }
  auto date = parse_date(j.at("date").get<std::string>());
  if (!date) throw std::invalid_argument("bad date (want yyyy-mm-dd)");
  r.date = *date;
  return r;
}

}  // namespace

ParsedLog parse_log(std::istream& in, LogFormat format, double max_value, bool strict) {
  ParsedLog out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    auto line = trim(text);
    if (line.empty()) continue;
    if (format == LogFormat::csv && line_no == 1 && line.starts_with("reviewer,")) continue;

    std::string reason;
    try {
      RawRating r = format == LogFormat::csv ? parse_csv_line(line) : parse_json_line(line);
      if (r.reviewer.empty() || r.product.empty()) {
        reason = "empty reviewer or product id";
      } else if (!(r.value >= 1.0 && r.value <= max_value)) {
        reason = fmt::format("value {} out of range [1, {}]", r.value, max_value);
      } else {
        out.ratings.push_back(std::move(r));
        continue;
      }
    } catch (const nlohmann::json::exception& ex) {
      reason = ex.what();
    } catch (const std::invalid_argument& ex) {
      reason = ex.what();
    }
    if (strict) throw ParseError(line_no, reason);
    out.issues.push_back({line_no, std::move(reason)});
  }
  return out;
}

std::vector<RawRating> prune(std::vector<RawRating> raw, std::size_t reviewer_min,
                             std::size_t product_min) {
  while (true) {
    std::map<std::string_view, std::set<std::string_view>> reviewer_products;
    std::map<std::string_view, std::size_t> product_ratings;
    for (const auto& r : raw) {
      reviewer_products[r.reviewer].insert(r.product);
      ++product_ratings[r.product];
    }
    auto doomed = [&](const RawRating& r) {
      return reviewer_products[r.reviewer].size() < reviewer_min ||
             product_ratings[r.product] < product_min;
    };
    // Decide every row before moving any string out; the maps view into raw.
    std::vector<bool> drop(raw.size());
    bool any = false;
    for (std::size_t i = 0; i < raw.size(); ++i) any |= drop[i] = doomed(raw[i]);
    if (!any) return raw;
    reviewer_products.clear();
    product_ratings.clear();
    std::vector<RawRating> kept;
    kept.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!drop[i]) kept.push_back(std::move(raw[i]));
    }
    raw = std::move(kept);
  }
}

DuplicateStats DuplicateStats::from(std::span<const RawRating> raw) {
  DuplicateStats s;
  for (const auto& r : raw) {
    ++s.pairs_[{r.reviewer, r.product}];
    ++s.products_[r.product];
  }
  return s;
}

std::size_t DuplicateStats::pair_count(const ReviewerId& reviewer, const ProductId& product) const {
  auto it = pairs_.find({reviewer, product});
  return it == pairs_.end() ? 0 : it->second;
}

std::size_t DuplicateStats::product_count(const ProductId& product) const {
  auto it = products_.find(product);
  return it == products_.end() ? 0 : it->second;
}

double compute_spamicity(const DuplicateStats& stats, const ReviewerId& reviewer,
                         const ProductId& product) {
  const auto mine = stats.pair_count(reviewer, product);
  if (mine <= 2) return 0.0;
  return static_cast<double>(mine) / static_cast<double>(stats.product_count(product));
}

TimeAxis normalize_time(std::span<const RawRating> raw) {
  if (raw.empty()) throw EmptyLog();
  auto earliest = std::min_element(raw.begin(), raw.end(),
                                   [](const auto& a, const auto& b) { return a.date < b.date; });
  return TimeAxis{earliest->date};
}

std::vector<EdgeRecord> collapse_duplicates(std::span<const RawRating> raw,
                                            const DuplicateStats& stats, const TimeAxis& axis) {
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // (reviewer, product, date, input position); the last of each pair wins.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = raw[a];
    const auto& y = raw[b];
    if (x.reviewer != y.reviewer) return x.reviewer < y.reviewer;
    if (x.product != y.product) return x.product < y.product;
    if (x.date != y.date) return x.date < y.date;
    return a < b;
  });

  std::vector<EdgeRecord> edges;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& r = raw[order[k]];
    const bool last_of_pair = k + 1 == order.size() || raw[order[k + 1]].reviewer != r.reviewer ||
                              raw[order[k + 1]].product != r.product;
    if (!last_of_pair) continue;
    edges.push_back({r.reviewer, r.product, r.value, axis.days(r.date),
                     compute_spamicity(stats, r.reviewer, r.product)});
  }
  return edges;
}

RatingGraph build_graph(std::vector<RawRating> raw, const IngestOptions& options) {
  raw = prune(std::move(raw), options.reviewer_min, options.product_min);
  if (raw.empty()) return std::move(RatingGraph::Builder(options.max_value)).build();

  const auto stats = DuplicateStats::from(raw);
  const auto axis = normalize_time(raw);
  RatingGraph::Builder builder(options.max_value, axis.epoch);
  for (const auto& e : collapse_duplicates(raw, stats, axis)) {
    builder.add(e.reviewer, e.product, e.value, e.time, e.spamicity);
  }
  return std::move(builder).build();
}

}  // namespace collusion
