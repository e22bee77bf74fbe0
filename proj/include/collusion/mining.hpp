#pragma once

#include <cstddef>
#include <vector>

#include "collusion/config.hpp"
#include "collusion/model.hpp"

namespace collusion {

/// Mined groups, deduplicated and in canonical order.
using CandidateSet = std::vector<Biclique>;

inline constexpr std::size_t kDefaultCandidateCap = 100'000;

/// Every maximal biclique (R, P) with |R| >= min_r and |P| >= min_p: P is
/// exactly the products co-rated by all of R, and R exactly the reviewers who
/// rated all of P. Mined as closed itemsets (reviewers are transactions,
/// products are items) with prefix-preserving closure extension; the
/// first-level branches run in parallel under OpenMP.
///
/// Throws BudgetExceeded once more than `cap` groups have been found, and
/// std::invalid_argument for min_r < 2 or min_p < 2.
CandidateSet enumerate_candidates(const RatingGraph& graph, std::size_t min_r, std::size_t min_p,
                                  std::size_t cap = kDefaultCandidateCap);

/// Single-threaded reference for enumerate_candidates.
CandidateSet enumerate_candidates_serial(const RatingGraph& graph, std::size_t min_r,
                                         std::size_t min_p,
                                         std::size_t cap = kDefaultCandidateCap);

/// True when a fragment is worth growing: GVS >= delta and GTS >= delta.
/// Fragments with a single reviewer have no pair to disagree and pass the
/// value test.
bool passes_sub_screen(const Biclique& fragment, const DetectionConfig& config);

/// Bottom-up search for collusive sub-groups of `parent`.
///
/// Starts from one fragment per relation, then repeatedly merges pairs of
/// fragments of the current level; a merge (union of reviewers and products)
/// survives to the next level when it passes the screen. A fragment contained
/// in another fragment of its level takes no part in merges. A fragment that
/// took part in no surviving merge, and is not contained in another fragment
/// of its level, is emitted if it has at least min_r reviewers and min_p
/// products. The parent itself is never
/// emitted, and a parent that passes the screen yields nothing. Throws
/// BudgetExceeded when more than `config.candidate_cap` distinct fragments are
/// screened.
std::vector<Biclique> find_sub_bicliques(const Biclique& parent, const DetectionConfig& config);

}  // namespace collusion
