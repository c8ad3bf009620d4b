#include "stoknap/pseudo_knapsack.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/functional/hash.hpp>

#include "stoknap/errors.hpp"

namespace stoknap {

bool key_less(const QuantizedVector& a, const QuantizedVector& b) {
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                      b.coords.end());
}

std::size_t ReachTable::KeyHash::operator()(const QuantizedVector& key) const {
  std::size_t h = 0;
  for (const Int& c : key.coords) boost::hash_combine(h, c);
  return h;
}

std::optional<std::size_t> ReachTable::find(const QuantizedVector& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> ReachTable::subset_ids(std::size_t entry_index) const {
  const Int& mask = entries_.at(entry_index).member_mask;
  std::vector<int> ids;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (bit_test(mask, static_cast<unsigned>(i))) ids.push_back(items_[i].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

QuantizedVector ReachTable::recompute_key(std::size_t entry_index) const {
  const Int& mask = entries_.at(entry_index).member_mask;
  QuantizedVector sum;
  sum.coords.assign(entries_.at(entry_index).key.coords.size(), Int(0));
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!bit_test(mask, static_cast<unsigned>(i))) continue;
    for (std::size_t d = 0; d < sum.coords.size(); ++d) sum.coords[d] += items_[i].size.coords[d];
  }
  return sum;
}

ReachTable build_reach_table(const std::vector<DpItem>& items, const std::vector<Int>& caps,
                             std::size_t max_entries) {
  std::size_t dim = items.empty() ? caps.size() : items[0].size.coords.size();
  for (const auto& item : items) {
    if (item.size.coords.size() != dim) {
      throw std::invalid_argument("build_reach_table: inconsistent item dimensions");
    }
    for (const Int& c : item.size.coords) {
      if (c < 0) throw std::invalid_argument("build_reach_table: negative size coordinate");
    }
  }
  if (!caps.empty() && caps.size() != dim) {
    throw std::invalid_argument("build_reach_table: caps dimension mismatch");
  }

  ReachTable table;
  table.items_ = items;
  QuantizedVector origin;
  origin.coords.assign(dim, Int(0));
  table.entries_.push_back(ReachEntry{origin, Rational(0), Int(0)});
  table.index_.emplace(origin, 0);

  auto within_caps = [&caps](const QuantizedVector& key) {
    for (std::size_t d = 0; d < caps.size(); ++d) {
      if (key.coords[d] > caps[d]) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < items.size(); ++i) {
    // Proposals are buffered and applied after the scan so that updates from
    // this item never feed back into its own pass.
    std::vector<ReachEntry> proposals;
    proposals.reserve(table.entries_.size());
    for (const ReachEntry& entry : table.entries_) {
      QuantizedVector key = entry.key;
      for (std::size_t d = 0; d < dim; ++d) key.coords[d] += items[i].size.coords[d];
      if (!caps.empty() && !within_caps(key)) continue;
      Rational profit = entry.best_profit + items[i].profit;
      Int mask = entry.member_mask;
      bit_set(mask, static_cast<unsigned>(i));
      proposals.push_back(ReachEntry{std::move(key), std::move(profit), std::move(mask)});
    }
    for (ReachEntry& proposal : proposals) {
      auto it = table.index_.find(proposal.key);
      if (it == table.index_.end()) {
        if (table.entries_.size() >= max_entries) {
          std::string caps_note;
          if (!caps.empty()) {
            Int product = 1;
            for (const Int& c : caps) product *= (c + 1);
            caps_note = ", cap product " + product.str();
          }
          throw BudgetError("build_reach_table: table exceeds " + std::to_string(max_entries) +
                            " entries" + caps_note);
        }
        table.index_.emplace(proposal.key, table.entries_.size());
        table.entries_.push_back(std::move(proposal));
      } else if (proposal.best_profit > table.entries_[it->second].best_profit) {
        table.entries_[it->second].best_profit = std::move(proposal.best_profit);
        table.entries_[it->second].member_mask = std::move(proposal.member_mask);
      }
    }
  }
  return table;
}

std::optional<std::pair<std::vector<int>, Rational>> solve_target(
    const std::vector<DpItem>& items, const QuantizedVector& target, std::size_t max_entries) {
  for (const Int& c : target.coords) {
    if (c < 0) return std::nullopt;
  }
  // Keys beyond the target in any coordinate can never reach it.
  ReachTable table = build_reach_table(items, target.coords, max_entries);
  auto entry = table.find(target);
  if (!entry) return std::nullopt;
  return std::make_pair(table.subset_ids(*entry), table.entries()[*entry].best_profit);
}

std::vector<std::size_t> enumerate_candidates(
    const ReachTable& table, const std::function<bool(const QuantizedVector&)>& filter) {
  std::vector<std::size_t> order;
  order.reserve(table.entries().size());
  for (std::size_t e = 0; e < table.entries().size(); ++e) {
    if (!filter || filter(table.entries()[e].key)) order.push_back(e);
  }
  std::sort(order.begin(), order.end(), [&table](std::size_t a, std::size_t b) {
    const auto& ea = table.entries()[a];
    const auto& eb = table.entries()[b];
    if (ea.best_profit != eb.best_profit) return ea.best_profit > eb.best_profit;
    return key_less(ea.key, eb.key);
  });
  return order;
}

}  // namespace stoknap
