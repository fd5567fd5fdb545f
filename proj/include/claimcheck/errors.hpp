#pragma once

#include <stdexcept>
#include <string>

namespace claimcheck {

// Error taxonomy. The CLI maps these onto stable exit codes:
// config/schema -> 2, backend unavailable -> 3, data integrity -> 4.

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IntegrityError : std::runtime_error {
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

struct LookupError : std::runtime_error {
  explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Transport failed after exhausting the retry budget, or no backend reachable.
struct GatewayUnavailable : std::runtime_error {
  explicit GatewayUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// Backend answered but violated the wire contract (e.g. score count mismatch).
struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace claimcheck
