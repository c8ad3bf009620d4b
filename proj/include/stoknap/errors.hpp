#ifndef STOKNAP_ERRORS_HPP
#define STOKNAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stoknap {

/// A configured resource budget (table size, candidate count, enumeration
/// cap) was exceeded. The CLI maps this to exit code 2.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stoknap

#endif
