#include "stoknap/candidate_stream.hpp"

namespace stoknap {

DescendingProduct::DescendingProduct(std::vector<std::vector<Rational>> profit_lists)
    : lists_(std::move(profit_lists)) {
  for (const auto& list : lists_) {
    if (list.empty()) {
      exhausted_ = true;
      return;
    }
  }
  push_if_new(std::vector<std::size_t>(lists_.size(), 0));
}

void DescendingProduct::push_if_new(std::vector<std::size_t> tuple) {
  if (!seen_.insert(tuple).second) return;
  Rational total = 0;
  for (std::size_t b = 0; b < tuple.size(); ++b) total += lists_[b][tuple[b]];
  heap_.push(Node{std::move(total), std::move(tuple)});
}

std::optional<std::vector<std::size_t>> DescendingProduct::next() {
  if (exhausted_ || heap_.empty()) return std::nullopt;
  Node top = heap_.top();
  heap_.pop();
  for (std::size_t b = 0; b < top.tuple.size(); ++b) {
    if (top.tuple[b] + 1 < lists_[b].size()) {
      std::vector<std::size_t> succ = top.tuple;
      ++succ[b];
      push_if_new(std::move(succ));
    }
  }
  return top.tuple;
}

}  // namespace stoknap
