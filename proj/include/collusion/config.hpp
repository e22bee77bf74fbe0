#pragma once

#include <cstddef>

namespace collusion {

/// Weights of the four collusion indicators in the degree of collusiveness.
struct Weights {
  double value = 0.25;   // GVS
  double time = 0.25;    // GTS
  double spam = 0.25;    // GRS
  double member = 0.25;  // GMS

  double sum() const noexcept { return value + time + spam + member; }

  /// Throws BadWeights unless every weight is >= 0 and the sum is 1 within 1e-9.
  void validate() const;

  friend bool operator==(const Weights&, const Weights&) = default;
};

inline constexpr double kWeightTolerance = 1e-9;

struct DetectionConfig {
  std::size_t min_r = 2;
  std::size_t min_p = 3;
  int max_tw = 30;
  double delta = 0.4;
  Weights weights{};
  std::size_t prune_reviewer_min = 10;
  std::size_t prune_product_min = 10;
  double max_value = 5.0;
  std::size_t candidate_cap = 100'000;

  /// Throws ConfigError (or BadWeights) when a field is out of range.
  void validate() const;

  friend bool operator==(const DetectionConfig&, const DetectionConfig&) = default;
};

}  // namespace collusion
