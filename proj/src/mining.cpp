#include "collusion/mining.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <boost/dynamic_bitset.hpp>
#include <omp.h>

#include "collusion/error.hpp"
#include "collusion/indicators.hpp"

namespace collusion {

namespace {

using Tidset = boost::dynamic_bitset<std::uint64_t>;

class ClosedMiner {
 public:
  ClosedMiner(const RatingGraph& graph, std::size_t min_r, std::size_t min_p, std::size_t cap)
      : graph_(graph), min_r_(min_r), min_p_(min_p), cap_(cap) {
    if (min_r < 2 || min_p < 2) throw std::invalid_argument("min_r and min_p must be >= 2");
    const auto nr = graph.reviewer_count();
    tids_.assign(graph.product_count(), Tidset(nr));
    for (const auto& e : graph.edges()) tids_[e.product].set(e.reviewer);
    root_tids_ = Tidset(nr);
    root_tids_.set();
    root_items_ = closure(root_tids_);
  }

  bool viable() const { return root_tids_.count() >= min_r_; }
  std::size_t item_count() const { return tids_.size(); }

  void emit_root(CandidateSet& out) { emit(root_items_, root_tids_, out); }

  /// The subtree of the root's extension by `item`.
  void mine_branch(ProductIndex item, CandidateSet& out) {
    if (std::binary_search(root_items_.begin(), root_items_.end(), item)) return;
    extend(root_items_, root_tids_, item, out);
  }

  bool aborted() const { return aborted_.load(std::memory_order_relaxed); }
  std::size_t found() const { return found_.load(); }

 private:
  std::vector<ProductIndex> closure(const Tidset& tids) const {
    std::vector<ProductIndex> items;
    for (ProductIndex p = 0; p < tids_.size(); ++p) {
      if (tids.is_subset_of(tids_[p])) items.push_back(p);
    }
    return items;
  }

  void extend(const std::vector<ProductIndex>& items, const Tidset& tids, ProductIndex item,
              CandidateSet& out) {
    if (aborted()) return;
    Tidset next = tids & tids_[item];
    if (next.count() < min_r_) return;
    auto closed = closure(next);
    // Prefix-preserving: the closure may not add anything below `item`.
    for (auto q : closed) {
      if (q >= item) break;
      if (!std::binary_search(items.begin(), items.end(), q)) return;
    }
    emit(closed, next, out);
    for (auto e = item + 1; e < tids_.size(); ++e) {
      if (std::binary_search(closed.begin(), closed.end(), e)) continue;
      extend(closed, next, e, out);
    }
  }

  void emit(const std::vector<ProductIndex>& items, const Tidset& tids, CandidateSet& out) {
    if (items.size() < min_p_ || tids.count() < min_r_) return;
    if (found_.fetch_add(1) + 1 > cap_) {
      aborted_ = true;
      return;
    }
    std::vector<ReviewerIndex> reviewers;
    reviewers.reserve(tids.count());
    for (auto r = tids.find_first(); r != Tidset::npos; r = tids.find_next(r)) {
      reviewers.push_back(static_cast<ReviewerIndex>(r));
    }
    out.push_back(Biclique::make(graph_, std::move(reviewers), items));
  }

  const RatingGraph& graph_;
  std::size_t min_r_, min_p_, cap_;
  std::vector<Tidset> tids_;
  Tidset root_tids_;
  std::vector<ProductIndex> root_items_;
  std::atomic<std::size_t> found_{0};
  std::atomic<bool> aborted_{false};
};

void finish(CandidateSet& out, const ClosedMiner& miner) {
  if (miner.aborted()) throw BudgetExceeded(miner.found());
  std::sort(out.begin(), out.end());
}

}  // namespace

CandidateSet enumerate_candidates(const RatingGraph& graph, std::size_t min_r, std::size_t min_p,
                                  std::size_t cap) {
  ClosedMiner miner(graph, min_r, min_p, cap);
  CandidateSet out;
  if (!miner.viable()) return out;
  miner.emit_root(out);

  const auto n = static_cast<std::int64_t>(miner.item_count());
#pragma omp parallel
  {
    CandidateSet local;
#pragma omp for schedule(dynamic, 1) nowait
    for (std::int64_t item = 0; item < n; ++item) {
      miner.mine_branch(static_cast<ProductIndex>(item), local);
    }
#pragma omp critical(collusion_mining_merge)
    std::move(local.begin(), local.end(), std::back_inserter(out));
  }
  finish(out, miner);
  return out;
}

CandidateSet enumerate_candidates_serial(const RatingGraph& graph, std::size_t min_r,
                                         std::size_t min_p, std::size_t cap) {
  ClosedMiner miner(graph, min_r, min_p, cap);
  CandidateSet out;
  if (!miner.viable()) return out;
  miner.emit_root(out);
  for (ProductIndex item = 0; item < miner.item_count(); ++item) miner.mine_branch(item, out);
  finish(out, miner);
  return out;
}

// ---------------------------------------------------------------------------

bool passes_sub_screen(const Biclique& fragment, const DetectionConfig& config) {
  if (gts(fragment, config.max_tw) < config.delta) return false;
  return fragment.reviewer_count() < 2 || gvs(fragment) >= config.delta;
}

namespace {

// A fragment of the parent as one bitset: bit i < nr is local row i, bit
// nr + j is local column j. Merging two fragments is a bitwise or.
using Mask = boost::dynamic_bitset<std::uint64_t>;

struct MaskHash {
  std::size_t operator()(const Mask& m) const {
    std::size_t h = m.size();
    std::vector<std::uint64_t> blocks(m.num_blocks());
    boost::to_block_range(m, blocks.begin());
    for (auto b : blocks) h ^= std::hash<std::uint64_t>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Screens a fragment straight off the parent's edge matrix, with the same
// arithmetic as gvs and gts on the restricted group.
class FragmentScreen {
 public:
  FragmentScreen(const Biclique& parent, const DetectionConfig& config)
      : parent_(parent), config_(config), nr_(parent.reviewer_count()) {}

  bool operator()(const Mask& m) {
    rows_.clear();
    cols_.clear();
    for (auto i = m.find_first(); i != Mask::npos; i = m.find_next(i)) {
      (i < nr_ ? rows_ : cols_).push_back(i < nr_ ? i : i - nr_);
    }
    return passes_time() && passes_value();
  }

 private:
  bool passes_time() const {
    double best = 0.0;
    for (auto c : cols_) {
      auto lo = std::numeric_limits<std::int64_t>::max();
      auto hi = std::numeric_limits<std::int64_t>::min();
      for (auto r : rows_) {
        const auto t = parent_.edge(r, c).time;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
      const auto span = hi - lo;
      const double tw =
          span > config_.max_tw ? 0.0 : 1.0 - static_cast<double>(span) / config_.max_tw;
      best = std::max(best, tw);
    }
    return best >= config_.delta;
  }

  bool passes_value() const {
    for (std::size_t a = 0; a + 1 < rows_.size(); ++a) {
      for (std::size_t b = a + 1; b < rows_.size(); ++b) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (auto c : cols_) {
          const double va = parent_.edge(rows_[a], c).value;
          const double vb = parent_.edge(rows_[b], c).value;
          dot += va * vb;
          na += va * va;
          nb += vb * vb;
        }
        if (std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb))) < config_.delta) return false;
      }
    }
    return true;
  }

  const Biclique& parent_;
  const DetectionConfig& config_;
  std::size_t nr_;
  std::vector<std::size_t> rows_, cols_;
};

}  // namespace

std::vector<Biclique> find_sub_bicliques(const Biclique& parent, const DetectionConfig& config) {
  // Nothing below a parent that already passes can be more similar than the
  // parent as a whole; that search is vacuous.
  if (passes_sub_screen(parent, config)) return {};

  const auto nr = parent.reviewer_count();
  const auto np = parent.product_count();

  FragmentScreen screen(parent, config);
  std::unordered_map<Mask, bool, MaskHash> screened;
  auto passes = [&](const Mask& f) {
    auto [it, fresh] = screened.try_emplace(f, false);
    if (fresh) {
      if (screened.size() > config.candidate_cap) throw BudgetExceeded(screened.size());
      it->second = screen(f);
    }
    return it->second;
  };

  std::vector<Mask> level;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      Mask f(nr + np);
      f.set(i);
      f.set(nr + j);
      if (passes(f)) level.push_back(std::move(f));
    }
  }

  std::vector<Mask> emitted;
  while (!level.empty()) {
    // A fragment inside another of the same level is settled: it is not
    // emitted and does not merge.
    std::vector<bool> processed(level.size(), false);
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = 0; j < level.size() && !processed[i]; ++j) {
        if (i != j && level[i].is_proper_subset_of(level[j])) processed[i] = true;
      }
    }
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (!processed[i]) live.push_back(i);
    }

    std::unordered_set<Mask, MaskHash> next;
    for (std::size_t a = 0; a + 1 < live.size(); ++a) {
      for (std::size_t b = a + 1; b < live.size(); ++b) {
        const auto i = live[a], j = live[b];
        Mask m = level[i] | level[j];
        if (passes(m)) {
          processed[i] = processed[j] = true;
          next.insert(std::move(m));
        }
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (processed[i]) continue;
      std::size_t rows = 0;
      for (std::size_t b = 0; b < nr; ++b) rows += level[i].test(b);
      const std::size_t cols = level[i].count() - rows;
      if (rows < config.min_r || cols < config.min_p) continue;
      emitted.push_back(level[i]);
    }
    level.assign(next.begin(), next.end());
    std::sort(level.begin(), level.end());
  }

  std::vector<Biclique> out;
  out.reserve(emitted.size());
  for (const auto& f : emitted) {
    std::vector<std::uint32_t> rows, cols;
    for (auto i = f.find_first(); i != Mask::npos; i = f.find_next(i)) {
      if (i < nr) {
        rows.push_back(static_cast<std::uint32_t>(i));
      } else {
        cols.push_back(static_cast<std::uint32_t>(i - nr));
      }
    }
    out.push_back(parent.restrict(rows, cols));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace collusion
