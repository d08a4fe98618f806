#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace capnn {

// Invalid configuration or parameters; maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A generated point would exceed the configured exponent cap.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, std::uint64_t block)
      : std::runtime_error(what), block_(block) {}
  std::uint64_t block() const noexcept { return block_; }

 private:
  std::uint64_t block_;
};

}  // namespace capnn
