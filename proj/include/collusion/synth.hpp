#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collusion/config.hpp"
#include "collusion/ingest.hpp"
#include "collusion/model.hpp"

namespace collusion::synth {

enum class ValueMode { promote, demote };

struct AttackScript {
  std::size_t group_size = 5;
  std::size_t target_count = 4;
  ValueMode mode = ValueMode::promote;
  int time_span_days = 2;
  double duplicate_rate = 0.0;  // share of attack ratings cast three times
  double camouflage_rate = 0.0;  // honest-looking extra ratings per colluder, as a share of target_count

  /// Throws InfeasibleScript on group_size < 2, target_count < 3, a negative
  /// span or a rate outside [0, 1].
  void validate() const;
};

/// Parses "size=5,targets=4,mode=promote,span=2,dup=0.2,camo=0.3". Missing
/// keys keep their defaults. Throws ConfigError.
AttackScript parse_attack(std::string_view spec);

struct TruthGroup {
  std::vector<ReviewerId> reviewers;  // sorted
  std::vector<ProductId> products;    // sorted
};

struct LabeledDataset {
  std::vector<RawRating> raw;
  std::vector<TruthGroup> truth;
};

struct GeneratorOptions {
  std::size_t honest_reviewers = 200;
  std::size_t products = 50;
  double density = 0.05;
  double max_value = 5.0;
  int days = 365;
  double noise_sigma = 0.7;
  Date start = Date{std::chrono::year{2004} / 1 / 1};
};

/// Honest reviewers rate each product with probability `density`, with value
/// round(quality + N(0, sigma)) clamped to [1, M] and a uniform day. Each attack
/// adds a fresh group of colluders rating distinct random targets with M
/// (promote) or 1 (demote) inside a window of `time_span_days`. Fully
/// determined by `seed`. Throws InfeasibleScript if a script needs more
/// targets than there are products.
LabeledDataset generate(const GeneratorOptions& options, std::span<const AttackScript> attacks,
                        std::uint64_t seed);

void write_csv(std::ostream& out, std::span<const RawRating> raw);
void write_truth(std::ostream& out, std::span<const TruthGroup> truth);
std::vector<TruthGroup> read_truth(std::istream& in);

// --- metrics -----------------------------------------------------------------

struct MatchRule {
  double min_jaccard = 0.5;
};

/// Reviewer-set Jaccard >= rule.min_jaccard and at least one shared product.
/// An exact (R, P) match always counts.
bool matches(const TruthGroup& retrieved, const TruthGroup& truth, const MatchRule& rule = {});

struct Metric {
  double value = 1.0;
  bool vacuous = false;  // denominator was zero; value reported as 1
};

Metric precision(std::span<const TruthGroup> retrieved, std::span<const TruthGroup> truth,
                 const MatchRule& rule = {});
Metric recall(std::span<const TruthGroup> retrieved, std::span<const TruthGroup> truth,
              const MatchRule& rule = {});

/// Names of a group's members, for matching against truth.
TruthGroup describe(const Biclique& group, const RatingGraph& graph);

struct SweepPoint {
  double delta = 0.0;
  std::size_t retrieved = 0;
  Metric precision;
  Metric recall;
};

/// Builds the graph once (prune thresholds from `config`), mines once, then
/// runs detection at each delta.
std::vector<SweepPoint> threshold_sweep(const LabeledDataset& dataset, const DetectionConfig& config,
                                        std::span<const double> deltas, const MatchRule& rule = {});

/// Parses "lo:hi:step" (inclusive of hi within 1e-9) or a comma list.
std::vector<double> parse_deltas(std::string_view spec);

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

/// Empirical cumulative distribution: sorted values paired with the percentage
/// of the sample at or below each one.
struct CumulativePoint {
  double value = 0.0;
  double percent = 0.0;
};
std::vector<CumulativePoint> cumulative_distribution(std::vector<double> values);

}  // namespace collusion::synth
