#ifndef STOKNAP_PSEUDO_KNAPSACK_HPP
#define STOKNAP_PSEUDO_KNAPSACK_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stoknap/rational.hpp"

namespace stoknap {

/// A multidimensional size in integer multiples of per-coordinate quanta.
/// The quanta themselves live with the caller (they are identical across all
/// items of one run); the DP only ever sees the integer coordinates.
struct QuantizedVector {
  std::vector<Int> coords;

  bool operator==(const QuantizedVector& other) const { return coords == other.coords; }
};

/// Lexicographic comparison on coordinates.
bool key_less(const QuantizedVector& a, const QuantizedVector& b);

struct DpItem {
  QuantizedVector size;  // coordinates are non-negative
  Rational profit;       // may be negative
  int id = 0;            // caller's item index, reported back in subsets
};

struct ReachEntry {
  QuantizedVector key;
  Rational best_profit;
  Int member_mask;  // bit i set = i-th item of the run included
};

/// Sparse table of every reachable coordinate vector, each holding the
/// maximum subset profit achieving it (ties keep the subset found first in
/// item order). The empty-set entry (0,...,0) -> 0 is always present.
class ReachTable {
 public:
  const std::vector<ReachEntry>& entries() const { return entries_; }
  std::optional<std::size_t> find(const QuantizedVector& key) const;

  /// Sorted ids of the items forming the entry's recorded subset.
  std::vector<int> subset_ids(std::size_t entry_index) const;

  /// Re-sums the recorded subset's size vectors (exact reconstruction check).
  QuantizedVector recompute_key(std::size_t entry_index) const;

 private:
  friend ReachTable build_reach_table(const std::vector<DpItem>&, const std::vector<Int>&,
                                      std::size_t);

  struct KeyHash {
    std::size_t operator()(const QuantizedVector& key) const;
  };

  std::vector<ReachEntry> entries_;
  std::vector<DpItem> items_;
  std::unordered_map<QuantizedVector, std::size_t, KeyHash> index_;
};

/// Runs the subset-sum DP over all items. `caps` (empty = unbounded) prunes
/// any key with a coordinate above the bound. Throws BudgetError when more
/// than `max_entries` keys become reachable.
ReachTable build_reach_table(const std::vector<DpItem>& items, const std::vector<Int>& caps = {},
                             std::size_t max_entries = 5'000'000);

/// Max-profit subset summing exactly to `target`, or nullopt when no subset
/// does.
std::optional<std::pair<std::vector<int>, Rational>> solve_target(
    const std::vector<DpItem>& items, const QuantizedVector& target,
    std::size_t max_entries = 5'000'000);

/// Entry indices passing `filter`, ordered by descending profit with
/// lexicographically ascending keys as the tie-break.
std::vector<std::size_t> enumerate_candidates(
    const ReachTable& table,
    const std::function<bool(const QuantizedVector&)>& filter = nullptr);

}  // namespace stoknap

#endif
