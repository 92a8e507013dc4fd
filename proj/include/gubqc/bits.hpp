#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "gubqc/errors.hpp"

namespace gubqc {

// Fixed-width bit string. Bit j corresponds to qubit j; the string form puts
// bit 0 first, so "101" has bits 0 and 2 set.
struct BitString {
  uint64_t bits = 0;
  int size = 0;

  BitString() = default;
  BitString(uint64_t value, int n) : bits(value), size(n) {
    if (n < 0 || n > 64) throw ShapeError("bit string length out of range");
    if (n < 64) bits &= (uint64_t{1} << n) - 1;
  }

  static BitString zeros(int n) { return BitString(0, n); }

  static BitString from_string(const std::string& s) {
    BitString b(0, static_cast<int>(s.size()));
    for (size_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1')
        b.bits |= uint64_t{1} << j;
      else if (s[j] != '0')
        throw ShapeError("bit string may contain only 0 and 1");
    }
    return b;
  }

  int bit(int j) const {
    if (j < 0 || j >= size) throw ShapeError("bit index out of range");
    return static_cast<int>((bits >> j) & 1u);
  }

  void set_bit(int j, int v) {
    if (j < 0 || j >= size) throw ShapeError("bit index out of range");
    if (v)
      bits |= uint64_t{1} << j;
    else
      bits &= ~(uint64_t{1} << j);
  }

  BitString operator^(const BitString& o) const {
    if (size != o.size) throw ShapeError("bit string length mismatch");
    return BitString(bits ^ o.bits, size);
  }

  bool operator==(const BitString&) const = default;

  bool operator<(const BitString& o) const {
    return size != o.size ? size < o.size : bits < o.bits;
  }

  bool any() const { return bits != 0; }
  int popcount() const { return std::popcount(bits); }

  std::string to_string() const {
    std::string s(static_cast<size_t>(size), '0');
    for (int j = 0; j < size; ++j)
      if ((bits >> j) & 1u) s[static_cast<size_t>(j)] = '1';
    return s;
  }
};

}  // namespace gubqc
