#include "collusion/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>

#include "collusion/config.hpp"
#include "collusion/error.hpp"

namespace collusion {

namespace {

template <typename T>
bool parse_int(std::string_view text, T& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  // yyyy-mm-dd, nothing else
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date date) {
  std::chrono::year_month_day ymd{date};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

void Weights::validate() const {
  const double s = sum();
  if (value < 0 || time < 0 || spam < 0 || member < 0 || !std::isfinite(s) ||
      std::abs(s - 1.0) > kWeightTolerance) {
    throw BadWeights(s);
  }
}

void DetectionConfig::validate() const {
  if (min_r < 2) throw ConfigError("min_r must be >= 2");
  if (min_p < 2) throw ConfigError("min_p must be >= 2");
  if (max_tw <= 0) throw ConfigError("max_tw must be > 0");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  if (!(max_value >= 1.0) || !std::isfinite(max_value)) throw ConfigError("max_value must be >= 1");
  if (candidate_cap == 0) throw ConfigError("candidate_cap must be > 0");
  weights.validate();
}

// ---------------------------------------------------------------------------

RatingGraph::Builder::Builder(double max_value, Date epoch) : max_value_(max_value), epoch_(epoch) {
  if (!(max_value >= 1.0) || !std::isfinite(max_value)) {
    throw ConfigError("max_value must be >= 1");
  }
}

RatingGraph::Builder& RatingGraph::Builder::add(const ReviewerId& reviewer,
                                                const ProductId& product, double value,
                                                std::int64_t time, double spamicity) {
  if (reviewer.empty() || product.empty()) throw ConfigError("empty reviewer or product id");
  if (!(value >= 1.0 && value <= max_value_)) {
    throw ConfigError(fmt::format("rating value {} outside [1, {}]", value, max_value_));
  }
  if (time < 0) throw ConfigError("rating time must be >= 0");
  if (!(spamicity >= 0.0 && spamicity <= 1.0)) throw ConfigError("spamicity outside [0, 1]");
  auto [it, inserted] = edges_.try_emplace({reviewer, product}, Pending{value, time, spamicity});
  if (!inserted) {
    throw DuplicateEdge(fmt::format("duplicate edge ({}, {})", reviewer, product));
  }
  return *this;
}

RatingGraph RatingGraph::Builder::build() && {
  RatingGraph g;
  g.max_value_ = max_value_;
  g.epoch_ = epoch_;

  for (const auto& [key, _] : edges_) {
    g.reviewers_.push_back(key.first);
    g.products_.push_back(key.second);
  }
  // reviewers_ is already sorted (map order), products_ is not.
  g.reviewers_.erase(std::unique(g.reviewers_.begin(), g.reviewers_.end()), g.reviewers_.end());
  std::sort(g.products_.begin(), g.products_.end());
  g.products_.erase(std::unique(g.products_.begin(), g.products_.end()), g.products_.end());

  g.edges_.reserve(edges_.size());
  g.reviewer_offsets_.assign(g.reviewers_.size() + 1, 0);
  ReviewerIndex r = 0;
  for (const auto& [key, e] : edges_) {
    while (g.reviewers_[r] != key.first) ++r;
    auto p = static_cast<ProductIndex>(
        std::lower_bound(g.products_.begin(), g.products_.end(), key.second) - g.products_.begin());
    g.edges_.push_back({r, p, e.value, e.time, e.spamicity});
    ++g.reviewer_offsets_[r + 1];
  }
  for (std::size_t i = 1; i < g.reviewer_offsets_.size(); ++i) {
    g.reviewer_offsets_[i] += g.reviewer_offsets_[i - 1];
  }

  g.product_offsets_.assign(g.products_.size() + 1, 0);
  for (const auto& e : g.edges_) ++g.product_offsets_[e.product + 1];
  for (std::size_t i = 1; i < g.product_offsets_.size(); ++i) {
    g.product_offsets_[i] += g.product_offsets_[i - 1];
  }
  g.product_index_.resize(g.edges_.size());
  std::vector<std::uint32_t> cursor(g.product_offsets_.begin(), g.product_offsets_.end() - 1);
  for (std::uint32_t i = 0; i < g.edges_.size(); ++i) {
    g.product_index_[cursor[g.edges_[i].product]++] = i;
  }
  edges_.clear();
  return g;
}

std::span<const RatingEdge> RatingGraph::reviewer_edges(ReviewerIndex r) const {
  if (r >= reviewers_.size()) throw std::out_of_range("reviewer index");
  return std::span(edges_).subspan(reviewer_offsets_[r], reviewer_offsets_[r + 1] - reviewer_offsets_[r]);
}

std::span<const std::uint32_t> RatingGraph::product_edges(ProductIndex p) const {
  if (p >= products_.size()) throw std::out_of_range("product index");
  return std::span(product_index_)
      .subspan(product_offsets_[p], product_offsets_[p + 1] - product_offsets_[p]);
}

const RatingEdge* RatingGraph::find(ReviewerIndex r, ProductIndex p) const {
  if (r >= reviewers_.size()) return nullptr;
  auto row = reviewer_edges(r);
  auto it = std::lower_bound(row.begin(), row.end(), p,
                             [](const RatingEdge& e, ProductIndex q) { return e.product < q; });
  if (it == row.end() || it->product != p) return nullptr;
  return &*it;
}

std::optional<ReviewerIndex> RatingGraph::reviewer_index(std::string_view id) const {
  auto it = std::lower_bound(reviewers_.begin(), reviewers_.end(), id);
  if (it == reviewers_.end() || *it != id) return std::nullopt;
  return static_cast<ReviewerIndex>(it - reviewers_.begin());
}

std::optional<ProductIndex> RatingGraph::product_index(std::string_view id) const {
  auto it = std::lower_bound(products_.begin(), products_.end(), id);
  if (it == products_.end() || *it != id) return std::nullopt;
  return static_cast<ProductIndex>(it - products_.begin());
}

// ---------------------------------------------------------------------------

Biclique Biclique::make(const RatingGraph& graph, std::vector<ReviewerIndex> reviewers,
                        std::vector<ProductIndex> products) {
  if (reviewers.empty() || products.empty()) {
    throw std::invalid_argument("biclique needs at least one reviewer and one product");
  }
  std::sort(reviewers.begin(), reviewers.end());
  reviewers.erase(std::unique(reviewers.begin(), reviewers.end()), reviewers.end());
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());
  if (reviewers.back() >= graph.reviewer_count() || products.back() >= graph.product_count()) {
    throw std::invalid_argument("biclique member outside the graph");
  }

  Biclique b;
  b.edges_.reserve(reviewers.size() * products.size());
  for (ReviewerIndex r : reviewers) {
    auto row = graph.reviewer_edges(r);
    auto it = row.begin();
    for (ProductIndex p : products) {
      it = std::lower_bound(it, row.end(), p,
                            [](const RatingEdge& e, ProductIndex q) { return e.product < q; });
      if (it == row.end() || it->product != p) {
        throw MissingEdge(graph.reviewer_id(r), graph.product_id(p));
      }
      b.edges_.push_back(*it);
    }
  }
  b.reviewers_ = std::move(reviewers);
  b.products_ = std::move(products);
  return b;
}

Biclique Biclique::from_ids(const RatingGraph& graph, std::span<const ReviewerId> reviewers,
                            std::span<const ProductId> products) {
  std::vector<ReviewerIndex> rs;
  std::vector<ProductIndex> ps;
  for (const auto& id : reviewers) {
    auto r = graph.reviewer_index(id);
    if (!r) throw std::invalid_argument("unknown reviewer " + id);
    rs.push_back(*r);
  }
  for (const auto& id : products) {
    auto p = graph.product_index(id);
    if (!p) throw std::invalid_argument("unknown product " + id);
    ps.push_back(*p);
  }
  return make(graph, std::move(rs), std::move(ps));
}

Biclique Biclique::restrict(std::span<const std::uint32_t> rows,
                            std::span<const std::uint32_t> cols) const {
  if (rows.empty() || cols.empty()) throw std::invalid_argument("empty restriction");
  Biclique b;
  b.reviewers_.reserve(rows.size());
  b.products_.reserve(cols.size());
  for (auto i : rows) b.reviewers_.push_back(reviewers_.at(i));
  for (auto j : cols) b.products_.push_back(products_.at(j));
  if (std::adjacent_find(b.reviewers_.begin(), b.reviewers_.end(), std::greater_equal<>()) !=
          b.reviewers_.end() ||
      std::adjacent_find(b.products_.begin(), b.products_.end(), std::greater_equal<>()) !=
          b.products_.end()) {
    throw std::invalid_argument("restriction positions must be ascending");
  }
  b.edges_.reserve(rows.size() * cols.size());
  for (auto i : rows) {
    for (auto j : cols) b.edges_.push_back(edge(i, j));
  }
  return b;
}

bool Biclique::contains(const Biclique& other) const {
  return std::includes(reviewers_.begin(), reviewers_.end(), other.reviewers_.begin(),
                       other.reviewers_.end()) &&
         std::includes(products_.begin(), products_.end(), other.products_.begin(),
                       other.products_.end());
}

}  // namespace collusion
