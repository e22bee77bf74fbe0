#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace collusion {

using ReviewerId = std::string;
using ProductId = std::string;

// Dense indices. A graph assigns them in lexicographic order of the ids, so
// ordering by index is the same as ordering by id.
using ReviewerIndex = std::uint32_t;
using ProductIndex = std::uint32_t;

using Date = std::chrono::sys_days;

std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

struct RatingEdge {
  ReviewerIndex reviewer = 0;
  ProductIndex product = 0;
  double value = 0.0;
  std::int64_t time = 0;
  double spamicity = 0.0;

  friend bool operator==(const RatingEdge&, const RatingEdge&) = default;
};

/// Bipartite reviewer x product graph with at most one labelled edge per pair.
/// Immutable once built; share it freely across threads.
class RatingGraph {
 public:
  class Builder {
   public:
    explicit Builder(double max_value = 5.0, Date epoch = Date{});

    /// Throws DuplicateEdge if the pair already has an edge, ConfigError if a
    /// field violates its range.
    Builder& add(const ReviewerId& reviewer, const ProductId& product, double value,
                 std::int64_t time, double spamicity = 0.0);

    RatingGraph build() &&;

   private:
    struct Pending {
      double value;
      std::int64_t time;
      double spamicity;
    };
    double max_value_;
    Date epoch_;
    std::map<std::pair<ReviewerId, ProductId>, Pending> edges_;
  };

  RatingGraph() = default;

  std::span<const ReviewerId> reviewers() const noexcept { return reviewers_; }
  std::span<const ProductId> products() const noexcept { return products_; }
  std::size_t reviewer_count() const noexcept { return reviewers_.size(); }
  std::size_t product_count() const noexcept { return products_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  /// All edges, sorted by (reviewer, product).
  std::span<const RatingEdge> edges() const noexcept { return edges_; }

  /// Edges of one reviewer, sorted by product.
  std::span<const RatingEdge> reviewer_edges(ReviewerIndex r) const;

  /// Positions in edges() of the edges on one product, sorted by reviewer.
  std::span<const std::uint32_t> product_edges(ProductIndex p) const;

  const RatingEdge* find(ReviewerIndex r, ProductIndex p) const;

  std::optional<ReviewerIndex> reviewer_index(std::string_view id) const;
  std::optional<ProductIndex> product_index(std::string_view id) const;

  const ReviewerId& reviewer_id(ReviewerIndex r) const { return reviewers_.at(r); }
  const ProductId& product_id(ProductIndex p) const { return products_.at(p); }

  double max_value() const noexcept { return max_value_; }
  Date epoch() const noexcept { return epoch_; }

 private:
  std::vector<ReviewerId> reviewers_;
  std::vector<ProductId> products_;
  std::vector<RatingEdge> edges_;
  std::vector<std::uint32_t> reviewer_offsets_;  // size reviewers_+1
  std::vector<std::uint32_t> product_offsets_;   // size products_+1
  std::vector<std::uint32_t> product_index_;     // edge positions grouped by product
  double max_value_ = 5.0;
  Date epoch_{};
};

/// A group (R, P) in which every reviewer rated every product, together with
/// the induced edges. Members are kept sorted; edges are row-major over
/// (reviewers, products).
class Biclique {
 public:
  /// Throws MissingEdge if some pair has no edge, std::invalid_argument on an
  /// empty side or an index outside the graph.
  static Biclique make(const RatingGraph& graph, std::vector<ReviewerIndex> reviewers,
                       std::vector<ProductIndex> products);

  /// Same, addressing members by id.
  static Biclique from_ids(const RatingGraph& graph, std::span<const ReviewerId> reviewers,
                           std::span<const ProductId> products);

  /// The sub-group formed by the given local row and column positions.
  Biclique restrict(std::span<const std::uint32_t> rows,
                    std::span<const std::uint32_t> cols) const;

  std::span<const ReviewerIndex> reviewers() const noexcept { return reviewers_; }
  std::span<const ProductIndex> products() const noexcept { return products_; }
  std::span<const RatingEdge> edges() const noexcept { return edges_; }
  std::size_t reviewer_count() const noexcept { return reviewers_.size(); }
  std::size_t product_count() const noexcept { return products_.size(); }

  const RatingEdge& edge(std::size_t row, std::size_t col) const {
    return edges_[row * products_.size() + col];
  }

  bool contains(const Biclique& other) const;

  /// Canonical identity: (sorted reviewers, sorted products).
  friend bool operator==(const Biclique& a, const Biclique& b) {
    return a.reviewers_ == b.reviewers_ && a.products_ == b.products_;
  }
  friend std::strong_ordering operator<=>(const Biclique& a, const Biclique& b) {
    if (auto c = a.reviewers_ <=> b.reviewers_; c != 0) return c;
    return a.products_ <=> b.products_;
  }

 private:
  Biclique() = default;

  std::vector<ReviewerIndex> reviewers_;
  std::vector<ProductIndex> products_;
  std::vector<RatingEdge> edges_;
};

}  // namespace collusion
