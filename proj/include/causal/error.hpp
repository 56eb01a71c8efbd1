#pragma once

#include <stdexcept>
#include <string>

namespace causal {

/// Invalid input or configuration. The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical budget (tail mass, Nyquist, quadrature) could not be met.
/// The CLI maps this to exit status 3.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace detail
}  // namespace causal
