// common.hpp: error categories and byte-string helpers shared across modules.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace intergrams {

// Unusable configuration or parameters. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem or read failure; the message names the offending path.
// CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lowercase hex encoding, two characters per byte.
std::string to_hex(std::string_view bytes);

// Inverse of to_hex. Throws ConfigError on odd length or non-hex characters.
std::string from_hex(std::string_view hex);

}  // namespace intergrams
