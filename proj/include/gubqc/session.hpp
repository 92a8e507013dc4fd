#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gubqc/protocol.hpp"
#include "gubqc/transcript.hpp"
#include "gubqc/transport.hpp"

namespace gubqc {

enum class TransportKind { kInProcess, kSocket };

struct TransportSpec {
  TransportKind kind = TransportKind::kInProcess;
  std::string host = "127.0.0.1";
  uint16_t port = 0;  // 0 picks an ephemeral port in socket mode

  bool operator==(const TransportSpec&) const = default;
};

struct SessionOptions {
  std::string config_text;  // embedded in the transcript when non-empty
  AliceOptions alice;
  BobOptions bob;
};

struct SessionResult {
  OutputMode output_mode = OutputMode::kClassical;
  std::optional<BitString> classical;
  std::optional<StateVector> quantum;  // after Alice's final correction
  SessionTranscript transcript;
  SecretKey key;
  double path_probability = 1.0;
  bool dead_branch = false;
};

struct BobRunInfo {
  double path_probability = 1.0;
  bool dead_branch = false;
};

// Runs one full delegated session. kInProcess wires the two state machines
// directly; kSocket starts Bob on a listener thread and talks TCP. Both
// record the same byte-identical transcript for the same seeds.
SessionResult run_session(const Computation& comp, const SubgroupSpec& spec,
                          uint64_t alice_seed, uint64_t bob_seed,
                          const TransportSpec& transport = {},
                          const SessionOptions& opts = {});

// Drives Alice's side over an existing transport. bob_seed_hint only fills
// the transcript's seed-bob line (a remote Bob owns its own seed).
SessionResult run_alice_over(Transport& transport, const Computation& comp,
                             const SubgroupSpec& spec, uint64_t alice_seed,
                             uint64_t bob_seed_hint,
                             const SessionOptions& opts = {});

// Serves Bob's side of one session over an existing transport.
BobRunInfo run_bob_over(Transport& transport, uint64_t bob_seed,
                        const BobOptions& opts = {});

}  // namespace gubqc
