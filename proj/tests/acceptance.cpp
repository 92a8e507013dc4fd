// Acceptance gate: one line per release criterion, nonzero exit when any
// fails. Runs against the library only, with fixed seeds throughout.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "gubqc/analyzer.hpp"
#include "gubqc/bounds.hpp"
#include "gubqc/diaggroup.hpp"
#include "gubqc/protocol.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/session.hpp"
#include "gubqc/transcript.hpp"

using namespace gubqc;

namespace {

struct Gate {
  int failures = 0;

  template <typename Fn>
  void run(const char* name, int64_t budget_ms, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (ok && budget_ms > 0 && ms > budget_ms) {
      ok = false;
      detail += " (over the " + std::to_string(budget_ms) + " ms budget)";
    }
    std::printf("[%s] %-24s %7lld ms  %s\n", ok ? "PASS" : "FAIL", name,
                static_cast<long long>(ms), detail.c_str());
    if (!ok) ++failures;
  }
};

Computation random_computation(const SubgroupSpec& spec, int n, int m,
                               OutputMode mode, Rng& rng) {
  Computation comp{n, m, {}, mode};
  for (int i = 0; i < m; ++i)
    comp.layers.push_back(sample_uniform(spec, n, rng));
  return comp;
}

bool check_correctness(std::string& detail) {
  Rng layer_rng(0xc044ee01);
  int combos = 0;
  double worst_fidelity = 1.0;
  double worst_tv = 0.0;
  int64_t branches = 0;
  for (uint32_t q : {2u, 8u}) {
    const SubgroupSpec spec{1, q};
    for (int n = 1; n <= 2; ++n) {
      for (int m = 1; m <= 3; ++m) {
        for (OutputMode mode :
             {OutputMode::kClassical, OutputMode::kQuantum}) {
          auto comp = random_computation(spec, n, m, mode, layer_rng);
          auto report = verify_correctness(comp, spec, 100);
          ++combos;
          branches += report.branches_checked;
          worst_fidelity = std::min(worst_fidelity, report.worst_fidelity);
          worst_tv = std::max(worst_tv, report.worst_total_variation);
          if (!report.pass || report.sampled_fallback) {
            detail = "combo q=" + std::to_string(q) +
                     " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                     " mode=" + output_mode_name(mode) + ": " + report.detail;
            return false;
          }
        }
      }
    }
  }
  std::ostringstream out;
  out << combos << " combos x 100 keys, " << branches
      << " branches, worst fidelity " << worst_fidelity << ", worst tv "
      << worst_tv;
  detail = out.str();
  return combos == 24 && worst_fidelity >= 1.0 - 1e-9 && worst_tv <= 1e-9;
}

bool check_blindness_exhaustive(std::string& detail) {
  const SubgroupSpec spec{1, 8};
  Rng rng(0xb11bd);
  double worst_td = 0.0;
  double worst_dev = 0.0;
  int pairs = 0;
  for (int n = 1; n <= 2; ++n) {
    for (int p = 0; p < 5; ++p) {
      auto pair = std::make_pair(sample_uniform(spec, n, rng),
                                 sample_uniform(spec, n, rng));
      auto report = verify_blindness_exhaustive(spec, n, pair);
      ++pairs;
      worst_td = std::max(worst_td, report.state_trace_distance);
      worst_dev =
          std::max(worst_dev, report.instruction_distribution_deviation);
      if (!report.pass) {
        detail = "pair " + std::to_string(p) + " at n=" + std::to_string(n) +
                 ": " + report.verdict;
        return false;
      }
    }
  }
  std::ostringstream out;
  out << pairs << " pairs, worst trace distance " << worst_td
      << ", instruction deviation " << worst_dev;
  detail = out.str();
  return worst_td < 1e-10 && worst_dev == 0.0;
}

bool check_blindness_sampled(std::string& detail) {
  const SubgroupSpec spec{1, 0};
  Rng rng(0xb11bd2);
  std::ostringstream out;
  for (int n = 1; n <= 2; ++n) {
    auto pair = std::make_pair(sample_uniform(spec, n, rng),
                               sample_uniform(spec, n, rng));
    auto report = verify_blindness_sampled(spec, n, pair, 100000, rng);
    if (!report.pass) {
      detail = "n=" + std::to_string(n) + ": " + report.verdict;
      return false;
    }
    if (n > 1) out << "; ";
    out << "n=" << n << " trace distance " << report.state_trace_distance
        << " (threshold " << report.state_threshold << "), min KS p "
        << report.min_ks_p_value;
  }
  detail = out.str();
  return true;
}

bool check_teleportation(std::string& detail) {
  Rng rng(0x7e1e);
  auto report = teleportation_identity_check(50, rng);
  std::ostringstream out;
  out << report.trials << " inputs, worst fidelity " << report.worst_fidelity
      << ", probability skew " << report.worst_probability_skew;
  detail = out.str();
  return report.pass && report.worst_fidelity >= 1.0 - 1e-10;
}

bool check_bound_values(std::string& detail) {
  const auto expect = [&](bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = "mismatch: " + what;
    return cond;
  };
  bool ok = true;

  auto s1 = gamma_bounds(SeparableSingleQubit{}, 8);
  ok &= expect(s1.lower == 8 && s1.upper == 16, "single-qubit at N=8");

  for (int k = 1; k <= 16; ++k) {
    auto full = gamma_bounds(SeparableKQubit{k}, k);
    const mpz_class expected = (mpz_class(1) << k) - 1;
    ok &= expect(full.lower == expected && full.upper == 2 * expected,
                 "k=N block at k=" + std::to_string(k));
  }

  auto commuting = gamma_bounds(Commuting{}, 5);
  ok &= expect(commuting.lower == 31 && commuting.upper == 31,
               "commuting ceiling at N=5");
  auto budgeted = gamma_bounds(Commuting{mpz_class(64), 6, 3}, 18);
  ok &= expect(budgeted.lower == 64 && budgeted.upper == 64,
               "commuting budget f=64");

  auto memory = gamma_bounds(MemoryK{2, 4}, 8);
  ok &= expect(memory.lower == 14 && memory.upper == 87,
               "memory spot value (14, 87)");

  int gap_points = 0;
  for (int64_t N = 4; N <= 400; N += 4) {
    auto table = protocol_comparison(N, 2);
    ok &= expect(table.rows[0].gap_vs_upper.has_value() &&
                     *table.rows[0].gap_vs_upper == mpq_class(8, 3),
                 "8/3 gap at N=" + std::to_string(N));
    ++gap_points;
  }

  if (ok) {
    detail = "spot values and the 8/3 gap over " +
             std::to_string(gap_points) + " values of N";
  }
  return ok;
}

bool check_bound_reductions(std::string& detail) {
  int points = 0;
  for (int64_t N = 1; N <= 120; ++N) {
    auto k1 = gamma_bounds(SeparableKQubit{1}, N);
    auto s1 = gamma_bounds(SeparableSingleQubit{}, N);
    if (k1.lower != s1.lower || k1.upper != s1.upper) {
      detail = "k=1 reduction diverges at N=" + std::to_string(N);
      return false;
    }
    ++points;
  }
  int mem_points = 0;
  for (int k = 1; k <= 6; ++k) {
    for (int sessions = 1; sessions <= 20; ++sessions) {
      const int64_t N = int64_t{k} * sessions;
      auto mem = gamma_bounds(MemoryK{k, k}, N);
      auto sep = gamma_bounds(SeparableKQubit{k}, N);
      if (mem.lower != sep.lower) {
        detail = "memory n=k reduction diverges at k=" + std::to_string(k) +
                 ", N=" + std::to_string(N);
        return false;
      }
      ++mem_points;
    }
  }
  detail = std::to_string(points) + " + " + std::to_string(mem_points) +
           " reduction points";
  return points >= 100 && mem_points >= 100;
}

bool check_transport_equivalence(std::string& detail) {
  Rng rng(0xacce77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(2));
    const int m = 1 + static_cast<int>(rng.uniform_int(3));
    const SubgroupSpec spec{1, rng.coin() ? 2u : 8u};
    const OutputMode mode =
        rng.coin() ? OutputMode::kClassical : OutputMode::kQuantum;
    auto comp = random_computation(spec, n, m, mode, rng);
    const uint64_t alice_seed = rng.next_u64();
    const uint64_t bob_seed = rng.next_u64();

    auto local = run_session(comp, spec, alice_seed, bob_seed);
    auto remote = run_session(comp, spec, alice_seed, bob_seed,
                              TransportSpec{TransportKind::kSocket,
                                            "127.0.0.1", 0});
    if (!(local.transcript == remote.transcript)) {
      detail = "transcripts diverge on trial " + std::to_string(trial) +
               " (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
      return false;
    }
  }
  detail = "10 random sessions byte-identical across transports";
  return true;
}

bool check_negative_controls(std::string& detail) {
  // Four pi/4 layers: non-Clifford, so a dropped correction term shows up in
  // the output statistics (Z-like layers can mask it).
  const SubgroupSpec spec{1, 8};
  const double pi = std::acos(-1.0);
  Computation comp{1, 4, {}, OutputMode::kClassical};
  for (int i = 0; i < 4; ++i) {
    comp.layers.push_back(
        DiagonalUnitary::from_flat_angles(spec, 1, {0.0, pi / 4}));
  }
  auto honest = verify_correctness(comp, spec, 8, 0x1111);
  if (!honest.pass) {
    detail = "honest baseline for the control unexpectedly failed";
    return false;
  }
  AliceOptions corrupt;
  corrupt.corrupt_dependency_sets = true;
  auto report = verify_correctness(comp, spec, 8, 0x1111, corrupt);
  if (report.pass) {
    detail = "corrupted dependency sets were not caught";
    return false;
  }

  auto all = enumerate_subgroup(SubgroupSpec{1, 4}, 1);
  std::vector<DiagonalUnitary> punctured;
  for (const auto& e : all) {
    if (e.lattice_indices() != std::vector<uint32_t>{0, 2})
      punctured.push_back(e);
  }
  auto closure = verify_closure_of(punctured);
  if (closure.ok()) {
    detail = "punctured subgroup passed the closure check";
    return false;
  }
  detail = "corrupted corrections worst tv " +
           std::to_string(report.worst_total_variation) +
           "; closure counterexample: " + closure.counterexample;
  return true;
}

}  // namespace

int main() {
  Gate gate;
  gate.run("correctness", 60000, check_correctness);
  gate.run("blindness-exhaustive", 30000, check_blindness_exhaustive);
  gate.run("blindness-sampled", 120000, check_blindness_sampled);
  gate.run("teleportation", 0, check_teleportation);
  gate.run("bounds-values", 0, check_bound_values);
  gate.run("bounds-reductions", 0, check_bound_reductions);
  gate.run("transport-equivalence", 0, check_transport_equivalence);
  gate.run("negative-controls", 0, check_negative_controls);

  if (gate.failures != 0) {
    std::printf("%d criterion(s) failed\n", gate.failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
