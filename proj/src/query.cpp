#include "collusion/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "collusion/indicators.hpp"

namespace collusion::query {

SyntaxError::SyntaxError(std::size_t position, std::string expected, std::string found)
    : Error(fmt::format("syntax error at position {}: expected {}, found {}", position, expected,
                        found)),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { word, number, quoted, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t pos = 0;
  double number = 0.0;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
         c == '@' || c == '#' || c == '/';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= text_.size()) return t;

    const char c = text_[pos_];
    if (c == '\'' || c == '"' || c == '`') {
      ++pos_;
      const auto start = pos_;
      while (pos_ < text_.size() && !closes(c, text_[pos_])) ++pos_;
      if (pos_ >= text_.size()) throw SyntaxError(text_.size(), "closing quote", "end of input");
      t.kind = Tok::quoted;
      t.text = std::string(text_.substr(start, pos_ - start));
      ++pos_;
      return t;
    }
    if (word_char(c) || (c == '.' && pos_ + 1 < text_.size() &&
                             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const auto start = pos_;
      while (pos_ < text_.size() && (word_char(text_[pos_]) || numeric_dot(start))) ++pos_;
      t.text = std::string(text_.substr(start, pos_ - start));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec == std::errc{} && ptr == t.text.data() + t.text.size() && std::isfinite(v)) {
        t.kind = Tok::number;
        t.number = v;
      } else {
        t.kind = Tok::word;
      }
      return t;
    }
    if (std::string_view("(){},;.>").find(c) != std::string_view::npos) {
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      ++pos_;
      return t;
    }
    throw SyntaxError(pos_, "token", fmt::format("'{}'", c));
  }

 private:
  static bool closes(char open, char c) {
    // `Jack' is accepted alongside 'Jack' and "Jack"
    return open == '`' ? c == '\'' || c == '`' : c == open;
  }

  // A dot belongs to a token only inside a number such as 0.25.
  bool numeric_dot(std::size_t start) const {
    if (text_[pos_] != '.') return false;
    for (auto i = start; i < pos_; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text_[i])) && text_[i] != '-') return false;
    }
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end:
      return "end of input";
    case Tok::quoted:
      return fmt::format("'{}'", t.text);
    default:
      return fmt::format("'{}'", t.text);
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  QueryAst run() {
    QueryAst ast;
    expect_keyword("getbicliques");
    if (accept_punct(".")) ast.projection = projection();
    expect_punct("(");
    if (!peek_punct(")")) ast.weights = weights();
    expect_punct(")");
    bool terminated = accept_punct(";");
    if (peek_keyword("filter")) {
      advance();
      ast.filters = filter_block();
      terminated = accept_punct(";") || terminated;
    }
    if (!terminated) fail("';'");
    if (tok_.kind != Tok::end) fail("end of query");
    return ast;
  }

 private:
  Projection projection() {
    if (tok_.kind == Tok::word) {
      if (iequals(tok_.text, "products") || iequals(tok_.text, "product")) {
        advance();
        return Projection::products;
      }
      if (iequals(tok_.text, "reviewers") || iequals(tok_.text, "reviewer")) {
        advance();
        return Projection::reviewers;
      }
    }
    fail("'products' or 'reviewers'");
  }

  Weights weights() {
    double w[4];
    for (int i = 0; i < 4; ++i) {
      if (i > 0) expect_punct(",");
      w[i] = number();
    }
    Weights out{w[0], w[1], w[2], w[3]};
    for (double x : w) {
      if (x < 0) throw SemanticError(fmt::format("negative weight {}", x));
    }
    if (std::abs(out.sum() - 1.0) > kWeightTolerance) {
      throw SemanticError(fmt::format("weights must sum to 1 (sum = {})", out.sum()));
    }
    return out;
  }

  Filters filter_block() {
    Filters f;
    expect_punct("{");
    do {
      clause(f);
    } while (!peek_punct("}"));
    expect_punct("}");
    return f;
  }

  void clause(Filters& f) {
    if (peek_keyword("on")) {
      advance();
      if (f.on) throw SemanticError("duplicate 'on' clause");
      f.on = id_list();
    } else if (peek_keyword("contains") || peek_keyword("contain")) {
      advance();
      if (f.contains) throw SemanticError("duplicate 'contains' clause");
      f.contains = id_list();
    } else if (peek_keyword("doc")) {
      advance();
      expect_punct(">");
      const double x = number();
      if (f.doc_min) throw SemanticError("duplicate 'DOC >' clause");
      if (!(x >= 0.0 && x <= 1.0)) throw SemanticError(fmt::format("DOC floor {} outside [0, 1]", x));
      f.doc_min = x;
    } else {
      fail("'on', 'contains' or 'DOC'");
    }
    expect_punct(";");
  }

  std::vector<std::string> id_list() {
    expect_punct("(");
    std::vector<std::string> ids;
    do {
      if (tok_.kind != Tok::word && tok_.kind != Tok::quoted && tok_.kind != Tok::number) {
        fail("identifier");
      }
      if (tok_.text.empty()) fail("non-empty identifier");
      ids.push_back(tok_.text);
      advance();
    } while (accept_punct(","));
    expect_punct(")");
    return ids;
  }

  double number() {
    if (tok_.kind != Tok::number) fail("number");
    const double v = tok_.number;
    advance();
    return v;
  }

  void advance() { tok_ = lexer_.next(); }

  bool peek_punct(std::string_view p) const { return tok_.kind == Tok::punct && tok_.text == p; }
  bool peek_keyword(std::string_view k) const {
    return tok_.kind == Tok::word && iequals(tok_.text, k);
  }

  bool accept_punct(std::string_view p) {
    if (!peek_punct(p)) return false;
    advance();
    return true;
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail(fmt::format("'{}'", p));
  }

  void expect_keyword(std::string_view k) {
    if (!peek_keyword(k)) fail(fmt::format("'{}'", k));
    advance();
  }

  [[noreturn]] void fail(std::string expected) const {
    throw SyntaxError(tok_.pos, std::move(expected), describe(tok_));
  }

  Lexer lexer_;
  Token tok_;
};

std::string quote(const std::string& id) {
  if (id.find('\'') == std::string::npos) return "'" + id + "'";
  return "\"" + id + "\"";
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += quote(ids[i]);
  }
  return out;
}

bool includes_all(std::span<const std::uint32_t> members, const std::vector<std::uint32_t>& wanted) {
  return std::includes(members.begin(), members.end(), wanted.begin(), wanted.end());
}

}  // namespace

QueryAst parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const QueryAst& ast) {
  std::string out = "getbicliques";
  if (ast.projection == Projection::products) out += ".products";
  if (ast.projection == Projection::reviewers) out += ".reviewers";
  out += '(';
  if (ast.weights) {
    const auto& w = *ast.weights;
    out += fmt::format("{},{},{},{}", w.value, w.time, w.spam, w.member);
  }
  out += ')';
  const auto& f = ast.filters;
  if (f.on || f.contains || f.doc_min) {
    out += " filter{";
    if (f.on) out += " on(" + join_ids(*f.on) + ");";
    if (f.contains) out += " contains(" + join_ids(*f.contains) + ");";
    if (f.doc_min) out += fmt::format(" DOC > {};", *f.doc_min);
    out += " }";
  }
  out += ';';
  return out;
}

Outcome evaluate(const QueryAst& ast, const RatingGraph& graph, const DetectionConfig& config,
                 const DetectionResult* cache, const EvalOptions& options) {
  Outcome outcome;
  const Weights weights = ast.weights.value_or(config.weights);
  const double floor = ast.filters.doc_min.value_or(config.delta);

  // Resolve filter ids. An unknown id can match nothing, so a filter holding
  // one rejects every group.
  bool impossible = false;
  auto resolve = [&](const std::vector<std::string>& ids, bool products) {
    std::vector<std::uint32_t> out;
    for (const auto& id : ids) {
      auto ix = products ? graph.product_index(id) : graph.reviewer_index(id);
      if (!ix) {
        if (options.strict) throw UnknownId(id);
        outcome.warnings.push_back(
            fmt::format("unknown {} '{}'", products ? "product" : "reviewer", id));
        impossible = true;
        continue;
      }
      out.push_back(*ix);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  const auto on = ast.filters.on ? resolve(*ast.filters.on, true) : std::vector<std::uint32_t>{};
  const auto contains =
      ast.filters.contains ? resolve(*ast.filters.contains, false) : std::vector<std::uint32_t>{};

  // The run under the effective weights. A cache saves the mining and every
  // collusion indicator it already holds.
  auto cfg = config;
  cfg.weights = weights;
  std::optional<DetectionResult> rerun;
  if (!cache) {
    rerun = detect(graph, cfg);
  } else if (!(cache->config == cfg)) {
    rerun = redetect(graph, cfg, *cache);
  }
  const DetectionResult& run = rerun ? *rerun : *cache;

  auto& result = outcome.result;
  result.projection = ast.projection;
  if (!impossible) {
    for (const auto& s : run.examined) {
      if (!includes_all(s.group.products(), on) || !includes_all(s.group.reviewers(), contains)) {
        continue;
      }
      if (!(s.report.doc > floor)) continue;
      result.groups.push_back(s);
    }
  }
  std::sort(result.groups.begin(), result.groups.end(),
            [](const ScoredGroup& a, const ScoredGroup& b) {
              if (a.report.doc != b.report.doc) return a.report.doc > b.report.doc;
              return a.group < b.group;
            });

  if (ast.projection == Projection::products) {
    std::set<ProductIndex> ps;
    for (const auto& s : result.groups) ps.insert(s.group.products().begin(), s.group.products().end());
    for (auto p : ps) result.products.push_back(graph.product_id(p));
  } else if (ast.projection == Projection::reviewers) {
    std::set<ReviewerIndex> rs;
    for (const auto& s : result.groups) {
      rs.insert(s.group.reviewers().begin(), s.group.reviewers().end());
    }
    for (auto r : rs) result.reviewers.push_back(graph.reviewer_id(r));
  }
  return outcome;
}

}  // namespace collusion::query
