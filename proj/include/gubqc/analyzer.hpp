#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "gubqc/diaggroup.hpp"
#include "gubqc/protocol.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"

namespace gubqc {

// The undelegated circuit: H^n U_m ... H^n U_1 |+>^n and its
// computational-basis distribution.
struct ReferenceResult {
  StateVector state = StateVector::plus_state(0);
  std::map<BitString, double> classical_distribution;
};

ReferenceResult reference_output(const Computation& comp);

struct CorrectnessReport {
  OutputMode output_mode = OutputMode::kClassical;
  int keys_tested = 0;
  int64_t branches_checked = 0;
  bool sampled_fallback = false;
  // Quantum mode tracks the worst per-branch fidelity against the reference
  // state; classical mode the worst per-key total variation distance.
  double worst_fidelity = 1.0;
  double worst_total_variation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// Replays every measurement branch of a full delegated session for
// key_samples sampled secret keys and compares against reference_output.
// Falls back to seeded sampling (with a widened statistical tolerance) when
// the branch count exceeds the enumeration cap.
CorrectnessReport verify_correctness(const Computation& comp,
                                     const SubgroupSpec& spec,
                                     int key_samples,
                                     uint64_t seed = 0x67756271635f6101ull,
                                     const AliceOptions& alice_opts = {});

enum class BlindnessMode { kExhaustive, kSampled };

struct BlindnessReport {
  BlindnessMode mode = BlindnessMode::kExhaustive;
  double state_trace_distance = 0.0;
  double instruction_distribution_deviation = 0.0;
  // Enumeration size (exhaustive) or sample count (sampled).
  int64_t sample_count = 0;
  double state_threshold = 0.0;
  double instruction_threshold = 0.0;
  double min_ks_p_value = 1.0;  // sampled mode only
  bool pass = false;
  std::string verdict;
};

// Enumerates every (D, r) secret: the instruction multiset {dagger(D)*U'}
// must be exactly uniform over the subgroup and identical for both U'
// choices, and the averaged prepared state must sit at I/2^n both
// unconditionally and conditioned on each D.
BlindnessReport verify_blindness_exhaustive(
    const SubgroupSpec& spec, int n,
    const std::pair<DiagonalUnitary, DiagonalUnitary>& u_prime_pair);

// Monte-Carlo variant for continuous families: mean-state trace distance
// gated at 3*2^n/sqrt(samples), plus per-coordinate two-sample
// Kolmogorov-Smirnov between the instruction marginals of the two U'
// choices at significance 0.01 / coordinate-count.
BlindnessReport verify_blindness_sampled(
    const SubgroupSpec& spec, int n,
    const std::pair<DiagonalUnitary, DiagonalUnitary>& u_prime_pair,
    int64_t samples, Rng& rng);

struct TeleportReport {
  int trials = 0;
  double worst_fidelity = 1.0;
  double worst_probability_skew = 0.0;
  bool pass = false;
};

// For random |phi>: prepare |phi> (x) |+>, apply CZ, measure qubit 0 in the
// Hadamard basis; every branch b must leave qubit 1 in X^b H|phi>.
TeleportReport teleportation_identity_check(int trials, Rng& rng);

struct CrossLayerProbe {
  int64_t samples = 0;
  int64_t distinct_products = 0;
  int64_t honest_baseline = 0;
  bool flagged = false;
  std::string note;
};

// Informational check outside the per-layer blindness statement: with
// independent per-layer secrets the combination C_2 * dagger(C_1) is
// uniform, while a rigged sampler that reuses D across layers collapses it
// to at most 2^n values. Meaningful when the subgroup (or sample count)
// exceeds 2^n.
CrossLayerProbe cross_layer_correlation_probe(const SubgroupSpec& spec, int n,
                                              int64_t samples, Rng& rng,
                                              bool reuse_d);

std::string to_text(const CorrectnessReport& report);
std::string to_text(const BlindnessReport& report);
std::string to_text(const TeleportReport& report);
std::string to_text(const CrossLayerProbe& report);

}  // namespace gubqc
