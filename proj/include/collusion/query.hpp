#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collusion/config.hpp"
#include "collusion/detector.hpp"
#include "collusion/error.hpp"
#include "collusion/model.hpp"

namespace collusion::query {

// getbicliques queries.
//
//   query     := "getbicliques" [ "." proj ] "(" [ weights ] ")" [ ";" ] [ filterblk ] ";"
//   proj      := "products" | "product" | "reviewers" | "reviewer"
//   weights   := number "," number "," number "," number        (v, t, r, m)
//   filterblk := "filter" "{" clause+ "}"
//   clause    := ( "on" "(" ids ")" | ("contains" | "contain") "(" ids ")"
//                | "DOC" ">" number ) ";"
//   ids       := id { "," id }      id: bare word, or quoted with ' " or `...'
//
// At least one ";" must follow the closing parenthesis or the filter block.
// Keywords are case-insensitive; whitespace and newlines are insignificant.

enum class Projection { bicliques, products, reviewers };

struct Filters {
  std::optional<std::vector<ProductId>> on;
  std::optional<std::vector<ReviewerId>> contains;
  std::optional<double> doc_min;

  friend bool operator==(const Filters&, const Filters&) = default;
};

struct QueryAst {
  Projection projection = Projection::bicliques;
  std::optional<Weights> weights;
  Filters filters;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, std::string found);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }
  /// True when the query simply stopped early; the REPL keeps reading.
  bool at_end() const noexcept { return found_ == "end of input"; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

/// Well-formed but meaningless: bad weights, repeated clause, DOC floor
/// outside [0, 1].
class SemanticError : public Error {
 public:
  using Error::Error;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& id) : Error("unknown id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// Reports the first error only.
QueryAst parse(std::string_view text);

/// Canonical text; parse(to_string(ast)) == ast.
std::string to_string(const QueryAst& ast);

struct QueryResult {
  Projection projection = Projection::bicliques;
  /// Matching groups with DOC recomputed under the effective weights, by
  /// descending DOC then canonical identity. Filled for every projection.
  std::vector<ScoredGroup> groups;
  std::vector<ProductId> products;    // union of P, sorted (products projection)
  std::vector<ReviewerId> reviewers;  // union of R, sorted (reviewers projection)
};

struct Outcome {
  QueryResult result;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  bool strict = false;  // unknown ids raise UnknownId instead of warning
};

/// Effective weights are the query's or the config's; the DOC floor is the
/// query's `DOC >` or the config's delta. With a cache, every examined group
/// is re-weighted without re-mining; without one, detection runs fresh under
/// the effective weights. `on` keeps groups whose products include the
/// list, `contains` groups whose reviewers include it.
Outcome evaluate(const QueryAst& ast, const RatingGraph& graph, const DetectionConfig& config,
                 const DetectionResult* cache = nullptr, const EvalOptions& options = {});

}  // namespace collusion::query
