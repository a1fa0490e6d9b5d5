#pragma once

#include <stdexcept>
#include <string>

namespace recon {

// Caller violated a documented precondition.
struct ContractError : std::invalid_argument {
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured cap (state count, edge count, variable count) was exceeded.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// A script or motion failed mid-execution; `index` is the offending step.
struct ExecutionError : std::runtime_error {
  ExecutionError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (step " + std::to_string(index) + ")"), step(index) {}
  std::size_t step;
};

// A template or pipeline self-check failed; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace recon
