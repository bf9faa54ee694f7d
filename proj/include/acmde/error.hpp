#pragma once

#include <stdexcept>
#include <string>

namespace acmde {

/// Rejected configuration: bad population size, degenerate bounds, unknown
/// algorithm or function ids, malformed config files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operator was called in violation of its precondition by library code
/// (for example selecting on an unevaluated individual).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace acmde
