#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gubqc {

// Register size or enumeration cap exceeded.
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions or operand shapes.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid run configuration; the message names the offending key or the
// violated constraint.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-grammar message or other session failure. Sessions abort on these.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frame decode failure. Carries the byte offset into the stream at which
// decoding failed.
struct WireError : std::runtime_error {
  size_t offset;
  WireError(const std::string& what, size_t off)
      : std::runtime_error(what + " (byte offset " + std::to_string(off) + ")"),
        offset(off) {}
};

}  // namespace gubqc
