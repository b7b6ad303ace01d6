#pragma once

#include <stdexcept>
#include <string>

namespace wsketch {

// Raised when a caller passes an argument outside an operation's domain
// (zero buckets, non-positive rho, hash outside [0,1), ...).
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input: trace lines, query names, whitelist files, binary records.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wsketch
