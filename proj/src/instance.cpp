#include "stoknap/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace stoknap {

void validate(const Instance& instance) {
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    validate(instance.items[i].dist);
    if (instance.items[i].profit <= 0) {
      throw std::invalid_argument("instance: item " + std::to_string(i) +
                                  " has non-positive profit");
    }
  }
  if (instance.capacity <= 0) throw std::invalid_argument("instance: capacity must be positive");
  if (instance.overflow_budget < 0 || instance.overflow_budget > 1) {
    throw std::invalid_argument("instance: overflow budget p must lie in [0,1]");
  }
  if (instance.epsilon <= 0 || instance.epsilon >= 1) {
    throw std::invalid_argument("instance: epsilon must lie in (0,1)");
  }
}

nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : instance.items) {
    items.push_back({{"dist", dist_to_json(item.dist)},
                     {"profit", rational_to_string(item.profit)}});
  }
  return nlohmann::json{{"items", items},
                        {"capacity", rational_to_string(instance.capacity)},
                        {"p", rational_to_string(instance.overflow_budget)},
                        {"defaults",
                         {{"epsilon", rational_to_string(instance.epsilon)},
                          {"seed", instance.seed},
                          {"delta", instance.delta}}}};
}

namespace {

Rational rat_field(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected rational value, got " + j.dump());
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
  Instance instance;
  for (const auto& item : j.at("items")) {
    instance.items.push_back(Item{dist_from_json(item.at("dist")), rat_field(item.at("profit"))});
  }
  instance.capacity = rat_field(j.at("capacity"));
  instance.overflow_budget = rat_field(j.at("p"));
  if (j.contains("defaults")) {
    const auto& d = j.at("defaults");
    if (d.contains("epsilon")) instance.epsilon = rat_field(d.at("epsilon"));
    if (d.contains("seed")) instance.seed = d.at("seed").get<std::uint64_t>();
    if (d.contains("delta")) instance.delta = d.at("delta").get<double>();
  }
  validate(instance);
  return instance;
}

nlohmann::json solution_to_json(const Solution& solution) {
  return nlohmann::json{
      {"selected", solution.selected},
      {"total_profit", rational_to_string(solution.total_profit)},
      {"overflow",
       {{"estimate", solution.overflow.point_estimate},
        {"half_width", solution.overflow.half_width},
        {"confidence", solution.overflow.confidence},
        {"samples_used", solution.overflow.samples_used}}},
      {"scheme", solution.scheme},
      {"epsilon", rational_to_string(solution.epsilon)},
      {"seed", solution.seed},
      {"warnings", solution.warnings},
      {"wall_time_ms", solution.wall_time_ms}};
}

Solution solution_from_json(const nlohmann::json& j) {
  Solution s;
  s.selected = j.at("selected").get<std::vector<int>>();
  s.total_profit = parse_rational(j.at("total_profit").get<std::string>());
  const auto& o = j.at("overflow");
  s.overflow.point_estimate = o.at("estimate").get<double>();
  s.overflow.half_width = o.at("half_width").get<double>();
  s.overflow.confidence = o.at("confidence").get<double>();
  s.overflow.samples_used = o.at("samples_used").get<std::uint64_t>();
  s.scheme = j.at("scheme").get<std::string>();
  s.epsilon = parse_rational(j.at("epsilon").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("warnings")) s.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("wall_time_ms")) s.wall_time_ms = j.at("wall_time_ms").get<double>();
  return s;
}

bool all_bernoulli(const Instance& instance) {
  return std::all_of(instance.items.begin(), instance.items.end(), [](const Item& item) {
    return std::holds_alternative<Bernoulli>(item.dist);
  });
}

std::vector<Rational> common_support(const Instance& instance) {
  std::vector<Rational> support;
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    const auto& dist = instance.items[i].dist;
    std::vector<Rational> values;
    if (const auto* b = std::get_if<Bernoulli>(&dist)) {
      (void)b;
      values = {Rational(0), Rational(1)};
    } else if (const auto* f = std::get_if<Finite>(&dist)) {
      values = f->support;
      std::sort(values.begin(), values.end());
    } else {
      return {};
    }
    if (i == 0) {
      support = values;
    } else if (values != support) {
      return {};
    }
  }
  return support;
}

std::vector<SizeDistribution> distributions_of(const Instance& instance) {
  std::vector<SizeDistribution> dists;
  dists.reserve(instance.items.size());
  for (const auto& item : instance.items) dists.push_back(item.dist);
  return dists;
}

std::vector<SizeDistribution> distributions_of(const Instance& instance,
                                               const std::vector<int>& subset) {
  std::vector<SizeDistribution> dists;
  dists.reserve(subset.size());
  for (int idx : subset) dists.push_back(instance.items.at(idx).dist);
  return dists;
}

Rational profit_of(const Instance& instance, const std::vector<int>& subset) {
  Rational total = 0;
  for (int idx : subset) total += instance.items.at(idx).profit;
  return total;
}

}  // namespace stoknap
