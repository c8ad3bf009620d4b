#ifndef STOKNAP_CANDIDATE_STREAM_HPP
#define STOKNAP_CANDIDATE_STREAM_HPP

#include <cstddef>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "stoknap/rational.hpp"

namespace stoknap {

/// Lazily enumerates index tuples (i_1, ..., i_B) over B descending profit
/// lists in non-increasing order of total profit (ties broken by
/// lexicographically smallest tuple). This replaces nested "for every target
/// combination" loops: combinations are surfaced best-first and the caller
/// stops at the first acceptable one.
class DescendingProduct {
 public:
  explicit DescendingProduct(std::vector<std::vector<Rational>> profit_lists);

  /// Next tuple, or nullopt when exhausted. Empty lists make the product
  /// empty.
  std::optional<std::vector<std::size_t>> next();

 private:
  struct Node {
    Rational total;
    std::vector<std::size_t> tuple;
  };
  struct NodeLess {
    bool operator()(const Node& a, const Node& b) const {
      if (a.total != b.total) return a.total < b.total;  // max-heap on total
      return b.tuple < a.tuple;  // then smallest tuple first
    }
  };

  void push_if_new(std::vector<std::size_t> tuple);

  std::vector<std::vector<Rational>> lists_;
  std::priority_queue<Node, std::vector<Node>, NodeLess> heap_;
  std::set<std::vector<std::size_t>> seen_;
  bool exhausted_ = false;
};

}  // namespace stoknap

#endif
