#ifndef STOKNAP_INSTANCE_HPP
#define STOKNAP_INSTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stoknap/distributions.hpp"
#include "stoknap/oracles.hpp"
#include "stoknap/rational.hpp"

namespace stoknap {

struct Item {
  SizeDistribution dist;
  Rational profit;
};

/// A chance-constrained knapsack instance: select S maximizing total profit
/// subject to Pr[sum of selected sizes > capacity] <= overflow_budget.
struct Instance {
  std::vector<Item> items;
  Rational capacity;
  Rational overflow_budget;  // p

  // Defaults carried by instance files.
  Rational epsilon = Rational(1, 10);
  std::uint64_t seed = 0;
  double delta = 1e-6;

  std::size_t size() const { return items.size(); }
};

struct Solution {
  std::vector<int> selected;  // sorted item indices
  Rational total_profit = 0;
  OverflowEstimate overflow;
  std::string scheme;
  Rational epsilon;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  double wall_time_ms = 0;
};

/// Throws std::invalid_argument on malformed instances (bad distributions,
/// non-positive profits, budget outside [0,1]).
void validate(const Instance& instance);

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::json& j);

bool all_bernoulli(const Instance& instance);

/// Common support of all items when every item is Finite/Bernoulli on one
/// shared value set; empty otherwise.
std::vector<Rational> common_support(const Instance& instance);

std::vector<SizeDistribution> distributions_of(const Instance& instance);
std::vector<SizeDistribution> distributions_of(const Instance& instance,
                                               const std::vector<int>& subset);
Rational profit_of(const Instance& instance, const std::vector<int>& subset);

}  // namespace stoknap

#endif
