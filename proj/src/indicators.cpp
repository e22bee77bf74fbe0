#include "collusion/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "collusion/error.hpp"

namespace collusion {

double pairwise_value_similarity(const Biclique& group, std::size_t a, std::size_t b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < group.product_count(); ++k) {
    const double va = group.edge(a, k).value;
    const double vb = group.edge(b, k).value;
    dot += va * vb;
    na += va * va;
    nb += vb * vb;
  }
  // values >= 1, so neither norm vanishes
  return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

double gvs(const Biclique& group) {
  const auto n = group.reviewer_count();
  if (n < 2) throw GroupTooSmall();
  double worst = 1.0;
  for (std::size_t a = 0; a + 1 < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      worst = std::min(worst, pairwise_value_similarity(group, a, b));
    }
  }
  return worst;
}

double time_window(const Biclique& group, std::size_t col, int max_tw) {
  auto lo = std::numeric_limits<std::int64_t>::max();
  auto hi = std::numeric_limits<std::int64_t>::min();
  for (std::size_t row = 0; row < group.reviewer_count(); ++row) {
    const auto t = group.edge(row, col).time;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  const auto span = hi - lo;
  if (span > max_tw) return 0.0;
  return 1.0 - static_cast<double>(span) / static_cast<double>(max_tw);
}

double gts(const Biclique& group, int max_tw) {
  double best = 0.0;
  for (std::size_t col = 0; col < group.product_count(); ++col) {
    best = std::max(best, time_window(group, col, max_tw));
  }
  return best;
}

double grs(const Biclique& group) {
  double spam = 0.0, total = 0.0;
  for (const auto& e : group.edges()) {
    spam += e.value * e.spamicity;
    total += e.value;
  }
  return spam / total;
}

// ---------------------------------------------------------------------------

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return (lower + upper) / 2.0;
}

double standard_distance(std::span<const double> values, double center) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - center) * (v - center);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

std::size_t SuspiciousnessTable::suspicious_count() const {
  return static_cast<std::size_t>(std::count(suspicious.begin(), suspicious.end(), true));
}

namespace {

struct ProductStats {
  double median;
  double distance;
  double credible;
};

ProductStats product_stats(const RatingGraph& graph, ProductIndex p) {
  const auto positions = graph.product_edges(p);
  const auto edges = graph.edges();
  std::vector<double> values;
  values.reserve(positions.size());
  for (auto pos : positions) values.push_back(edges[pos].value);

  ProductStats s{};
  s.median = median_of(values);
  s.distance = standard_distance(values, s.median);
  double weighted = 0.0, credible = 0.0;
  for (double v : values) {
    if (s.median - s.distance <= v && v <= s.median + s.distance) {
      weighted += v;
      credible += 1.0;
    }
  }
  s.credible = credible > 0.0 ? weighted / credible : s.median;
  return s;
}

void reviewer_errors(const RatingGraph& graph, const std::vector<double>& credible, ReviewerIndex r,
                     double& lp, double& un) {
  double sq = 0.0, worst = 0.0;
  for (const auto& e : graph.reviewer_edges(r)) {
    const double err = std::abs(e.value - credible[e.product]);
    sq += err * err;
    worst = std::max(worst, err);
  }
  lp = std::sqrt(sq);
  un = worst;
}

void classify(SuspiciousnessTable& t) {
  t.lp_median = median_of(t.lp_error);
  t.un_median = median_of(t.uniform_error);
  t.lp_distance = standard_distance(t.lp_error, t.lp_median);
  t.un_distance = standard_distance(t.uniform_error, t.un_median);
  t.suspicious.assign(t.lp_error.size(), false);
  for (std::size_t i = 0; i < t.lp_error.size(); ++i) {
    t.suspicious[i] = t.lp_error[i] > t.lp_median + t.lp_distance ||
                      t.uniform_error[i] > t.un_median + t.un_distance;
  }
}

SuspiciousnessTable sized_table(const RatingGraph& graph) {
  SuspiciousnessTable t;
  t.median.resize(graph.product_count());
  t.distance.resize(graph.product_count());
  t.credible.resize(graph.product_count());
  t.lp_error.resize(graph.reviewer_count());
  t.uniform_error.resize(graph.reviewer_count());
  return t;
}

}  // namespace

SuspiciousnessTable build_suspiciousness(const RatingGraph& graph) {
  auto t = sized_table(graph);
  const auto np = static_cast<std::int64_t>(graph.product_count());
  const auto nr = static_cast<std::int64_t>(graph.reviewer_count());

#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < np; ++p) {
    const auto s = product_stats(graph, static_cast<ProductIndex>(p));
    t.median[p] = s.median;
    t.distance[p] = s.distance;
    t.credible[p] = s.credible;
  }

#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < nr; ++r) {
    reviewer_errors(graph, t.credible, static_cast<ReviewerIndex>(r), t.lp_error[r],
                    t.uniform_error[r]);
  }

  classify(t);
  return t;
}

SuspiciousnessTable build_suspiciousness_serial(const RatingGraph& graph) {
  auto t = sized_table(graph);
  for (ProductIndex p = 0; p < graph.product_count(); ++p) {
    const auto s = product_stats(graph, p);
    t.median[p] = s.median;
    t.distance[p] = s.distance;
    t.credible[p] = s.credible;
  }
  for (ReviewerIndex r = 0; r < graph.reviewer_count(); ++r) {
    reviewer_errors(graph, t.credible, r, t.lp_error[r], t.uniform_error[r]);
  }
  classify(t);
  return t;
}

double gms(const Biclique& group, const SuspiciousnessTable& table) {
  std::size_t hits = 0;
  for (auto r : group.reviewers()) hits += table.is_suspicious(r) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(group.reviewer_count());
}

// ---------------------------------------------------------------------------

CohortMaxima CohortMaxima::of(std::span<const Biclique> cohort) {
  CohortMaxima m;
  for (const auto& g : cohort) m.include(g);
  return m;
}

void CohortMaxima::include(const Biclique& group) {
  reviewers = std::max(reviewers, group.reviewer_count());
  products = std::max(products, group.product_count());
}

double gs(const Biclique& group, const CohortMaxima& cohort) {
  return static_cast<double>(group.reviewer_count()) / static_cast<double>(cohort.reviewers);
}

double gps(const Biclique& group, const CohortMaxima& cohort) {
  return static_cast<double>(group.product_count()) / static_cast<double>(cohort.products);
}

double gs(const Biclique& group, std::span<const Biclique> cohort) {
  return gs(group, CohortMaxima::of(cohort));
}

double gps(const Biclique& group, std::span<const Biclique> cohort) {
  return gps(group, CohortMaxima::of(cohort));
}

double doc(double gvs, double gts, double grs, double gms, const Weights& weights) {
  weights.validate();
  return gvs * weights.value + gts * weights.time + grs * weights.spam + gms * weights.member;
}

double doc(const IndicatorReport& report, const Weights& weights) {
  return doc(report.gvs, report.gts, report.grs, report.gms, weights);
}

double di(double gps, double gs) { return (gps + gs) / 2.0; }

IndicatorReport collusion_indicators(const Biclique& group, const SuspiciousnessTable& table,
                                     int max_tw) {
  IndicatorReport r;
  r.gvs = gvs(group);
  r.gts = gts(group, max_tw);
  r.grs = grs(group);
  r.gms = gms(group, table);
  return r;
}

void finish_report(IndicatorReport& report, const Biclique& group, const CohortMaxima& cohort,
                   const Weights& weights) {
  report.gs = gs(group, cohort);
  report.gps = gps(group, cohort);
  report.doc = doc(report, weights);
  report.di = di(report.gps, report.gs);
}

std::vector<IndicatorReport> score_groups(std::span<const Biclique> groups,
                                          const SuspiciousnessTable& table,
                                          const CohortMaxima& cohort,
                                          const DetectionConfig& config) {
  config.weights.validate();
  std::vector<IndicatorReport> out(groups.size());
  const auto n = static_cast<std::int64_t>(groups.size());
  // gvs() throws only for single-reviewer groups; check up front so no
  // exception escapes the parallel region.
  for (const auto& g : groups) {
    if (g.reviewer_count() < 2) throw GroupTooSmall();
  }

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = collusion_indicators(groups[i], table, config.max_tw);
    finish_report(out[i], groups[i], cohort, config.weights);
  }
  return out;
}

std::vector<IndicatorReport> score_groups_serial(std::span<const Biclique> groups,
                                                 const SuspiciousnessTable& table,
                                                 const CohortMaxima& cohort,
                                                 const DetectionConfig& config) {
  std::vector<IndicatorReport> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    auto r = collusion_indicators(g, table, config.max_tw);
    finish_report(r, g, cohort, config.weights);
    out.push_back(r);
  }
  return out;
}

}  // namespace collusion
