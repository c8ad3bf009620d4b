#include "stoknap/gate.hpp"

#include <algorithm>

#include "stoknap/oracles.hpp"
#include "stoknap/rng.hpp"

namespace stoknap {

std::uint64_t subset_key(const std::vector<int>& subset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int idx : subset) {
    h ^= static_cast<std::uint64_t>(idx) + 1;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Gate::Gate(std::vector<SizeDistribution> dists, Rational capacity, Rational q, Rational tau,
           double delta_each, std::uint64_t master_seed)
    : dists_(std::move(dists)),
      capacity_(std::move(capacity)),
      q_(std::move(q)),
      tau_(std::move(tau)),
      delta_each_(delta_each),
      master_seed_(master_seed) {}

bool Gate::test(const std::vector<int>& subset) {
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t key = subset_key(sorted);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  ++evaluations_;

  std::vector<SizeDistribution> selected;
  selected.reserve(sorted.size());
  for (int idx : sorted) selected.push_back(dists_.at(idx));

  bool verdict = true;
  if (q_ >= 1) {
    // Any estimate is <= q; no sampling needed.
  } else {
    bool rejected = false;
    if (4 * tau_ < 1 && q_ + 4 * tau_ < 1) {
      RngStream coarse(derive_seed(master_seed_, "gate-coarse", key));
      // An estimate above q + 4*tau certifies the true overflow exceeds q.
      rejected = !leq_check(selected, capacity_, q_ + 4 * tau_, 4 * tau_, delta_each_, coarse);
    }
    if (rejected) {
      verdict = false;
    } else {
      RngStream fine(derive_seed(master_seed_, "gate-fine", key));
      verdict = leq_check(selected, capacity_, q_, tau_, delta_each_, fine);
    }
  }
  memo_.emplace(key, verdict);
  return verdict;
}

}  // namespace stoknap
