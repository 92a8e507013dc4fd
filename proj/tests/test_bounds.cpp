#include <gmpxx.h>

#include <string>

#include "doctest.h"
#include "gubqc/bounds.hpp"
#include "gubqc/errors.hpp"

using namespace gubqc;

TEST_CASE("single-qubit setting brackets N and 2N") {
  auto b = gamma_bounds(SeparableSingleQubit{}, 8);
  CHECK(b.lower == 8);
  CHECK(b.upper == 16);
  CHECK(gamma_bounds(SeparableSingleQubit{}, 1).lower == 1);
}

TEST_CASE("k-qubit setting scales exponentially in the block size") {
  auto b = gamma_bounds(SeparableKQubit{4}, 4);
  CHECK(b.lower == 15);
  CHECK(b.upper == 30);
  auto wide = gamma_bounds(SeparableKQubit{3}, 12);
  CHECK(wide.lower == 4 * 7);
  CHECK(wide.upper == 2 * wide.lower);
  CHECK_THROWS_AS(gamma_bounds(SeparableKQubit{3}, 8), ConfigError);
  CHECK_THROWS_AS(gamma_bounds(SeparableKQubit{0}, 8), ConfigError);
}

TEST_CASE("whole-transmission blocks reach the 2^N - 1 ceiling") {
  auto b = gamma_bounds(SeparableKQubit{10}, 10);
  CHECK(b.lower == mpz_class(1023));
  CHECK(b.upper == mpz_class(2046));
}

TEST_CASE("commuting setting is exactly 2^N - 1 without a budget") {
  auto b = gamma_bounds(Commuting{}, 5);
  CHECK(b.lower == 31);
  CHECK(b.upper == 31);
}

TEST_CASE("a commuting gate budget pins both bounds to f(N)") {
  Commuting setting{mpz_class(64), 6, 3};
  auto b = gamma_bounds(setting, 18);
  CHECK(b.lower == 64);
  CHECK(b.upper == 64);
  // Budget must fit the register: 2^n >= f(N).
  CHECK_THROWS_AS(gamma_bounds(Commuting{mpz_class(64), 5, 3}, 15),
                  ConfigError);
  // And must split evenly over m - 1 interior layers.
  CHECK_THROWS_AS(gamma_bounds(Commuting{mpz_class(64), 6, 4}, 24),
                  ConfigError);
  CHECK_THROWS_AS(gamma_bounds(Commuting{mpz_class(0), 6, 3}, 18),
                  ConfigError);
}

TEST_CASE("the memory setting reproduces the spot values") {
  auto b = gamma_bounds(MemoryK{2, 4}, 8);
  CHECK(b.lower == 14);
  CHECK(b.upper == 87);
  CHECK_THROWS_AS(gamma_bounds(MemoryK{5, 4}, 8), ConfigError);   // n < k
  CHECK_THROWS_AS(gamma_bounds(MemoryK{2, 3}, 8), ConfigError);   // n not | N
  CHECK_THROWS_AS(gamma_bounds(MemoryK{2, 4}, 1), ConfigError);   // N < k
}

TEST_CASE("block size one collapses to the single-qubit setting") {
  for (int64_t N = 1; N <= 120; ++N) {
    auto k1 = gamma_bounds(SeparableKQubit{1}, N);
    auto s1 = gamma_bounds(SeparableSingleQubit{}, N);
    CHECK(k1.lower == s1.lower);
    CHECK(k1.upper == s1.upper);
  }
}

TEST_CASE("memory without streaming room collapses to the k-qubit setting") {
  int points = 0;
  for (int k = 1; k <= 6; ++k) {
    for (int sessions = 1; sessions <= 20; ++sessions) {
      const int64_t N = int64_t{k} * sessions;
      auto mem = gamma_bounds(MemoryK{k, k}, N);
      auto sep = gamma_bounds(SeparableKQubit{k}, N);
      CHECK(mem.lower == sep.lower);
      ++points;
    }
  }
  CHECK(points >= 100);
}

TEST_CASE("the k-qubit upper bound is twice the lower bound everywhere") {
  int points = 0;
  for (int k = 1; k <= 8; ++k) {
    for (int sessions = 1; sessions <= 15; ++sessions) {
      const int64_t N = int64_t{k} * sessions;
      auto b = gamma_bounds(SeparableKQubit{k}, N);
      CHECK(b.upper == 2 * b.lower);
      ++points;
    }
  }
  CHECK(points >= 100);
}

TEST_CASE("achieved rates count free parameters per transmitted qubit") {
  auto unit = achieved_rate(SubgroupSpec{1, 0}, 1, 1, false);
  CHECK(unit.hidden_gates == 1);
  CHECK(unit.transmitted_qubits == 1);
  CHECK(unit.rate == mpq_class(1));

  auto pairs = achieved_rate(SubgroupSpec{2, 0}, 2, 1, false);
  CHECK(pairs.rate == mpq_class(3, 2));

  auto full = achieved_rate(SubgroupSpec{4, 0}, 4, 3, false);
  CHECK(full.hidden_gates == 45);
  CHECK(full.transmitted_qubits == 12);
  CHECK(full.rate == mpq_class(15, 4));

  auto quantum = achieved_rate(SubgroupSpec{4, 0}, 4, 3, true);
  CHECK(quantum.transmitted_qubits == 16);
  CHECK(quantum.rate == mpq_class(45, 16));

  CHECK_THROWS_AS(achieved_rate(SubgroupSpec{1, 8}, 1, 1, false), ConfigError);
  CHECK_THROWS_AS(achieved_rate(SubgroupSpec{3, 0}, 4, 1, false), ConfigError);
}

TEST_CASE("achieved rates stay inside the k-qubit bounds") {
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 6; ++m) {
      const int n = k;
      auto rate = achieved_rate(SubgroupSpec{k, 0}, n, m, false);
      auto b = gamma_bounds(SeparableKQubit{k}, int64_t{n} * m);
      CHECK(rate.hidden_gates == b.lower);
      CHECK(rate.hidden_gates <= b.upper);
    }
  }
}

TEST_CASE("protocol comparison reports the 8/3 gap at width two") {
  auto table = protocol_comparison(8, 2);
  CHECK(table.upper == 16);
  REQUIRE(table.rows.size() == 5);

  const auto& ubqc_explicit = table.rows[0];
  REQUIRE(ubqc_explicit.value.has_value());
  CHECK(*ubqc_explicit.value == mpq_class(6));
  REQUIRE(ubqc_explicit.gap_vs_upper.has_value());
  CHECK(*ubqc_explicit.gap_vs_upper == mpq_class(8, 3));

  const auto& ubqc_general = table.rows[1];
  REQUIRE(ubqc_general.value.has_value());
  CHECK(*ubqc_general.value == mpq_class(8));
  CHECK(*ubqc_general.gap_vs_upper == mpq_class(2));

  const auto& gubqc_row = table.rows[2];
  REQUIRE(gubqc_row.value.has_value());
  CHECK(*gubqc_row.value == mpq_class(12));  // (8/2)(2^2-1)

  const auto& gmmr = table.rows[3];
  CHECK_FALSE(gmmr.value.has_value());
  CHECK(gmmr.constant_unspecified);

  const auto& cap = table.rows[4];
  REQUIRE(cap.value.has_value());
  CHECK(*cap.value == mpq_class(16));
  CHECK(*cap.gap_vs_upper == mpq_class(1));

  CHECK_THROWS_AS(protocol_comparison(8, 1), ConfigError);
}

TEST_CASE("the explicit-circuit gap is 8/3 whenever 4 divides N") {
  for (int64_t N = 4; N <= 400; N += 4) {
    auto table = protocol_comparison(N, 2);
    REQUIRE(table.rows[0].gap_vs_upper.has_value());
    CHECK(*table.rows[0].gap_vs_upper == mpq_class(8, 3));
  }
}

TEST_CASE("rational rendering is exact until it has to truncate") {
  CHECK(rational_to_decimal(mpq_class(45, 12)) == "3.75");
  CHECK(rational_to_decimal(mpq_class(8, 3)) == "~2.666666");
  CHECK(rational_to_decimal(mpq_class(5)) == "5");
  CHECK(rational_to_decimal(mpq_class(-1, 2)) == "-0.5");
}

TEST_CASE("report renderers include the numbers") {
  auto text = to_text(gamma_bounds(MemoryK{2, 4}, 8));
  CHECK(text.find("14") != std::string::npos);
  CHECK(text.find("87") != std::string::npos);
  auto table_text = to_text(protocol_comparison(8, 2));
  CHECK(table_text.find("8/3") != std::string::npos);
}
