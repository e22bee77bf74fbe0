#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collusion/model.hpp"

namespace collusion {

struct RawRating {
  ReviewerId reviewer;
  ProductId product;
  double value = 0.0;
  Date date{};

  friend bool operator==(const RawRating&, const RawRating&) = default;
};

enum class LogFormat { csv, jsonl };

struct ParseIssue {
  std::size_t line = 0;
  std::string reason;
};

struct ParsedLog {
  std::vector<RawRating> ratings;  // file order
  std::vector<ParseIssue> issues;
};

/// CSV lines are `reviewer,product,value,yyyy-mm-dd` (an optional header line
/// starting with `reviewer,` is skipped). JSON lines carry the keys
/// reviewer/product/value/date. Blank lines are ignored. Malformed lines are
/// collected as issues, or thrown as ParseError when `strict` is set.
ParsedLog parse_log(std::istream& in, LogFormat format, double max_value = 5.0,
                    bool strict = false);

/// Drops ratings of reviewers with fewer than `reviewer_min` distinct products
/// and of products with fewer than `product_min` raw ratings, repeating until
/// neither rule removes anything. Survivors keep their input order.
std::vector<RawRating> prune(std::vector<RawRating> raw, std::size_t reviewer_min,
                             std::size_t product_min);

/// Rating multiplicities: |E(i,j)| per pair and |E(j)| per product.
class DuplicateStats {
 public:
  static DuplicateStats from(std::span<const RawRating> raw);

  std::size_t pair_count(const ReviewerId& reviewer, const ProductId& product) const;
  std::size_t product_count(const ProductId& product) const;

 private:
  std::map<std::pair<ReviewerId, ProductId>, std::size_t> pairs_;
  std::map<ProductId, std::size_t> products_;
};

/// 0 when the pair has at most two ratings, otherwise |E(i,j)| / |E(j)|.
double compute_spamicity(const DuplicateStats& stats, const ReviewerId& reviewer,
                         const ProductId& product);

struct TimeAxis {
  Date epoch{};
  std::int64_t days(Date d) const { return (d - epoch).count(); }
};

/// Epoch is the earliest date in the log. Throws EmptyLog.
TimeAxis normalize_time(std::span<const RawRating> raw);

/// One collapsed (reviewer, product) relation, still addressed by id.
struct EdgeRecord {
  ReviewerId reviewer;
  ProductId product;
  double value = 0.0;
  std::int64_t time = 0;
  double spamicity = 0.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Keeps the chronologically last rating of each pair (ties: later in the
/// input wins) and attaches its spamicity. Output sorted by (reviewer, product).
std::vector<EdgeRecord> collapse_duplicates(std::span<const RawRating> raw,
                                            const DuplicateStats& stats, const TimeAxis& axis);

struct IngestOptions {
  std::size_t reviewer_min = 10;
  std::size_t product_min = 10;
  double max_value = 5.0;
};

/// prune -> stats -> normalize_time -> collapse -> graph. An empty (or fully
/// pruned) log yields an empty graph.
RatingGraph build_graph(std::vector<RawRating> raw, const IngestOptions& options);

}  // namespace collusion
