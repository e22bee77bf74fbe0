#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "collusion/config.hpp"
#include "collusion/model.hpp"

namespace collusion {

/// Indicator values of one group. All fields lie in [0, 1].
struct IndicatorReport {
  double gvs = 0.0;  // value similarity
  double gts = 0.0;  // time similarity
  double grs = 0.0;  // rating spamicity
  double gms = 0.0;  // member suspiciousness
  double gs = 0.0;   // group size
  double gps = 0.0;  // target product size
  double doc = 0.0;  // degree of collusiveness
  double di = 0.0;   // damaging impact

  friend bool operator==(const IndicatorReport&, const IndicatorReport&) = default;
};

// --- collusion indicators --------------------------------------------------

/// Cosine of the two reviewers' rating vectors over the group's products.
/// `a` and `b` are row positions inside the group.
double pairwise_value_similarity(const Biclique& group, std::size_t a, std::size_t b);

/// Minimum pairwise similarity. Throws GroupTooSmall below two reviewers.
double gvs(const Biclique& group);

/// Tightness of the rating time window on the product at column `col`:
/// 0 beyond `max_tw` days, else 1 - span / max_tw.
double time_window(const Biclique& group, std::size_t col, int max_tw);

/// Largest time_window over the group's products.
double gts(const Biclique& group, int max_tw);

/// Value-weighted share of spamicity over the group's edges.
double grs(const Biclique& group);

/// Global reviewer error analysis against per-product credible means.
struct SuspiciousnessTable {
  // per product
  std::vector<double> median;    // m_j
  std::vector<double> distance;  // d_j
  std::vector<double> credible;  // g_j
  // per reviewer
  std::vector<double> lp_error;       // LP(i), L2 norm
  std::vector<double> uniform_error;  // UN(i), max norm
  // global
  double lp_median = 0.0;
  double un_median = 0.0;
  double lp_distance = 0.0;
  double un_distance = 0.0;
  std::vector<bool> suspicious;  // S, indexed by reviewer

  std::size_t suspicious_count() const;
  bool is_suspicious(ReviewerIndex r) const { return suspicious.at(r); }
};

/// Median of a sample; even sizes average the two middle values. Empty -> 0.
double median_of(std::vector<double> values);

/// Root mean square deviation of `values` from `center`. Empty -> 0.
double standard_distance(std::span<const double> values, double center);

/// OpenMP over products and reviewers.
SuspiciousnessTable build_suspiciousness(const RatingGraph& graph);

/// Single-threaded reference for build_suspiciousness.
SuspiciousnessTable build_suspiciousness_serial(const RatingGraph& graph);

/// Share of the group's reviewers that are in S.
double gms(const Biclique& group, const SuspiciousnessTable& table);

// --- defectiveness indicators ----------------------------------------------

/// Largest reviewer and product counts over a cohort of groups.
struct CohortMaxima {
  std::size_t reviewers = 0;
  std::size_t products = 0;

  static CohortMaxima of(std::span<const Biclique> cohort);
  void include(const Biclique& group);
};

double gs(const Biclique& group, const CohortMaxima& cohort);
double gps(const Biclique& group, const CohortMaxima& cohort);
double gs(const Biclique& group, std::span<const Biclique> cohort);
double gps(const Biclique& group, std::span<const Biclique> cohort);

// --- aggregation ------------------------------------------------------------

/// Weighted sum of the four collusion indicators. Throws BadWeights.
double doc(double gvs, double gts, double grs, double gms, const Weights& weights);
double doc(const IndicatorReport& report, const Weights& weights);

/// Mean of GPS and GS.
double di(double gps, double gs);

/// Weight-independent part of a report (gvs, gts, grs, gms); the remaining
/// fields are left at zero.
IndicatorReport collusion_indicators(const Biclique& group, const SuspiciousnessTable& table,
                                     int max_tw);

/// Fills gs, gps, doc and di of a report that already has its collusion
/// indicators.
void finish_report(IndicatorReport& report, const Biclique& group, const CohortMaxima& cohort,
                   const Weights& weights);

/// Full reports for a batch of groups; OpenMP across groups.
std::vector<IndicatorReport> score_groups(std::span<const Biclique> groups,
                                          const SuspiciousnessTable& table,
                                          const CohortMaxima& cohort,
                                          const DetectionConfig& config);

/// Single-threaded reference for score_groups.
std::vector<IndicatorReport> score_groups_serial(std::span<const Biclique> groups,
                                                 const SuspiciousnessTable& table,
                                                 const CohortMaxima& cohort,
                                                 const DetectionConfig& config);

}  // namespace collusion
