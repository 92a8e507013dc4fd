#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gubqc/diaggroup.hpp"

namespace gubqc {

// Alice prepares one qubit at a time.
struct SeparableSingleQubit {
  bool operator==(const SeparableSingleQubit&) const = default;
};

// Alice prepares entangled k-qubit states.
struct SeparableKQubit {
  int k = 1;

  bool operator==(const SeparableKQubit&) const = default;
};

// Alice applies commuting operators; an optional gate budget f(N) caps how
// many single-parameter gates she may apply per run (n and m describe the
// session shape the budget must fit).
struct Commuting {
  std::optional<mpz_class> f_n;
  int n = 0;
  int m = 0;

  bool operator==(const Commuting&) const = default;
};

// Alice owns a k-qubit quantum memory and streams qubits out one at a time;
// n is the per-session register width entering the lower-bound formula.
struct MemoryK {
  int k = 1;
  int n = 1;

  bool operator==(const MemoryK&) const = default;
};

using Setting =
    std::variant<SeparableSingleQubit, SeparableKQubit, Commuting, MemoryK>;

std::string setting_name(const Setting& setting);

struct GammaBounds {
  Setting setting;
  int64_t N = 0;
  mpz_class lower;
  mpz_class upper;
};

// Closed-form bounds on the number of hideable single-parameter gates for N
// transmitted qubits, in exact integer arithmetic.
GammaBounds gamma_bounds(const Setting& setting, int64_t N);

struct AchievedRate {
  mpz_class hidden_gates;
  mpz_class transmitted_qubits;
  mpq_class rate;
};

// Gates hidden by a full session: m layers of (n/k) blocks with 2^k - 1
// free parameters each, over N = n*m transmitted qubits (plus n more when
// the quantum-mode return register is counted).
AchievedRate achieved_rate(const SubgroupSpec& spec, int n, int m,
                           bool count_return_register);

struct ComparisonRow {
  std::string protocol;
  std::string expression;
  std::optional<mpq_class> value;
  std::optional<mpq_class> gap_vs_upper;
  bool constant_unspecified = false;
  std::string note;
};

struct ComparisonTable {
  int64_t N = 0;
  int n = 0;
  mpz_class upper;  // single-qubit-setting upper bound 2N
  std::vector<ComparisonRow> rows;
};

ComparisonTable protocol_comparison(int64_t N, int n);

// Exact decimal rendering of a rational (trailing zeros trimmed, "~" prefix
// when the expansion was truncated).
std::string rational_to_decimal(const mpq_class& value, int max_digits = 6);

std::string to_text(const GammaBounds& bounds);
std::string to_text(const ComparisonTable& table);

}  // namespace gubqc
