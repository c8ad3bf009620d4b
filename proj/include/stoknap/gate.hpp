#ifndef STOKNAP_GATE_HPP
#define STOKNAP_GATE_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "stoknap/distributions.hpp"
#include "stoknap/rational.hpp"

namespace stoknap {

/// Monte Carlo acceptance gate deciding "overflow of subset <=_tau q" for
/// candidate subsets of one instance.
///
/// A candidate first meets a cheap rejection stage at width 4*tau: an
/// estimate above q + 4*tau already certifies (within the stage's confidence)
/// that the true overflow exceeds q, so the candidate may fail early without
/// touching the relation's guarantees. Survivors get the full-width decision
/// with the standard Hoeffding sample count. Verdicts are memoized per
/// subset, and every stage draws from a stream addressed by the subset
/// content, so results are independent of evaluation order.
class Gate {
 public:
  Gate(std::vector<SizeDistribution> dists, Rational capacity, Rational q, Rational tau,
       double delta_each, std::uint64_t master_seed);

  /// subset holds indices into the instance's item list.
  bool test(const std::vector<int>& subset);

  std::size_t evaluations() const { return evaluations_; }

 private:
  std::vector<SizeDistribution> dists_;
  Rational capacity_;
  Rational q_;
  Rational tau_;
  double delta_each_;
  std::uint64_t master_seed_;
  std::size_t evaluations_ = 0;
  std::unordered_map<std::uint64_t, bool> memo_;  // keyed by subset content hash
};

/// Order-independent 64-bit key of a sorted index list.
std::uint64_t subset_key(const std::vector<int>& subset);

}  // namespace stoknap

#endif
