#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace collusion::testing {

RatingGraph random_graph(std::size_t nr, std::size_t np, double density, std::mt19937_64& rng,
                         int max_day, bool spam) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> value(1, 5);
  std::uniform_int_distribution<int> day(0, max_day);
  RatingGraph::Builder b(5.0);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t p = 0; p < np; ++p) {
      if (unit(rng) < density) {
        const double s = spam && unit(rng) < 0.3 ? unit(rng) : 0.0;
        b.add(fmt::format("r{:03}", r), fmt::format("p{:03}", p), value(rng), day(rng), s);
      }
    }
  }
  return std::move(b).build();
}

std::vector<Group> brute_force_maximal_bicliques(const RatingGraph& graph, std::size_t min_r,
                                                 std::size_t min_p) {
  const auto nr = graph.reviewer_count();
  const auto np = graph.product_count();
  // adjacency matrix
  std::vector<std::vector<bool>> rated(nr, std::vector<bool>(np, false));
  for (const auto& e : graph.edges()) rated[e.reviewer][e.product] = true;

  std::vector<Group> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << nr); ++mask) {
    std::vector<ReviewerIndex> reviewers;
    for (std::size_t r = 0; r < nr; ++r) {
      if (mask >> r & 1) reviewers.push_back(static_cast<ReviewerIndex>(r));
    }
    if (reviewers.size() < min_r) continue;
    std::vector<ProductIndex> common;
    for (std::size_t p = 0; p < np; ++p) {
      bool all = true;
      for (auto r : reviewers) all = all && rated[r][p];
      if (all) common.push_back(static_cast<ProductIndex>(p));
    }
    if (common.size() < min_p) continue;
    // closed: nobody outside R rated all of P
    bool closed = true;
    for (std::size_t r = 0; r < nr && closed; ++r) {
      if (mask >> r & 1) continue;
      bool all = true;
      for (auto p : common) all = all && rated[r][p];
      if (all) closed = false;
    }
    if (closed) out.emplace_back(std::move(reviewers), std::move(common));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

std::vector<Group> brute_force_screened_subgroups(const Biclique& parent, std::size_t min_r,
                                                  std::size_t min_p, double delta, int max_tw) {
  const auto nr = parent.reviewer_count();
  const auto np = parent.product_count();
  std::vector<Group> out;
  for (std::uint64_t rm = 1; rm < (std::uint64_t{1} << nr); ++rm) {
    std::vector<ReviewerIndex> rows;
    for (std::size_t i = 0; i < nr; ++i) {
      if (rm >> i & 1) rows.push_back(static_cast<ReviewerIndex>(i));
    }
    if (rows.size() < min_r) continue;
    for (std::uint64_t pm = 1; pm < (std::uint64_t{1} << np); ++pm) {
      std::vector<ProductIndex> cols;
      for (std::size_t j = 0; j < np; ++j) {
        if (pm >> j & 1) cols.push_back(static_cast<ProductIndex>(j));
      }
      if (cols.size() < min_p) continue;

      double worst = 1.0;
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
          std::vector<double> va, vb;
          for (auto j : cols) {
            va.push_back(parent.edge(rows[a], j).value);
            vb.push_back(parent.edge(rows[b], j).value);
          }
          worst = std::min(worst, cosine(va, vb));
        }
      }
      double best_tw = 0.0;
      for (auto j : cols) {
        std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = 0;
        for (auto i : rows) {
          lo = std::min(lo, parent.edge(i, j).time);
          hi = std::max(hi, parent.edge(i, j).time);
        }
        const double tw = hi - lo > max_tw ? 0.0 : 1.0 - static_cast<double>(hi - lo) / max_tw;
        best_tw = std::max(best_tw, tw);
      }
      if (worst >= delta && best_tw >= delta) out.emplace_back(rows, cols);
    }
  }
  return out;
}

RatingGraph planted_trio_graph(std::size_t crowd) {
  RatingGraph::Builder b;
  const char* products[] = {"t1", "t2", "t3"};
  for (auto r : {"r1", "r2", "r3"}) {
    for (auto p : products) b.add(r, p, 5, 10);
  }
  struct Scattered {
    const char* id;
    int values[3];
    int days[3];
  };
  const Scattered rest[] = {{"r4", {1, 1, 5}, {60, 120, 180}},
                            {"r5", {5, 1, 1}, {80, 140, 200}},
                            {"r6", {1, 5, 1}, {100, 160, 40}}};
  for (const auto& s : rest) {
    for (int j = 0; j < 3; ++j) b.add(s.id, products[j], s.values[j], s.days[j]);
  }
  for (std::size_t h = 0; h < crowd; ++h) {
    b.add(fmt::format("h{:03}", h), products[h % 3], 2 + static_cast<double>(h % 3),
          static_cast<std::int64_t>(220 + 7 * h));
  }
  return std::move(b).build();
}

}  // namespace collusion::testing
