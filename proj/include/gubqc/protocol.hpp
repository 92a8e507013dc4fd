#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gubqc/bits.hpp"
#include "gubqc/diaggroup.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"
#include "gubqc/wire.hpp"

namespace gubqc {

enum class OutputMode { kClassical, kQuantum };

const char* output_mode_name(OutputMode mode);

// The delegated computation: m diagonal layers U_1..U_m on n qubits, with a
// fixed H^n between layers (and after the last).
struct Computation {
  int n = 1;
  int m = 1;
  std::vector<DiagonalUnitary> layers;
  OutputMode output_mode = OutputMode::kClassical;
};

// Checks layer count, per-layer width, subgroup membership, and the n*m
// simulator cap.
void validate_computation(const Computation& comp, const SubgroupSpec& spec);

// Alice's per-layer secrets.
struct SecretKey {
  std::vector<DiagonalUnitary> d;
  std::vector<BitString> r;
};

SecretKey sample_secret_key(const SubgroupSpec& spec, int n, int m, Rng& rng);

using ProtocolMessage = wire::Message;

// S_i = {i, i-2, i-4, ...} down to 1; empty for i < 1.
std::vector<int> dependency_set(int i);

// c_i = XOR of s_k over S_{i-1}; all-zeros for i <= 1. s_history[k-1] holds
// s_k and must cover every k in S_{i-1}.
BitString correction_bits(int i, const std::vector<BitString>& s_history,
                          int n);

// |phi_i> = Z^{r_i} D_i |+>^n  (1-based layer index)
StateVector alice_prepare_layer(int i, const SecretKey& key, int n);

// Tensors the registers (register 1 on the lowest qubits) and applies CZ
// between qubit j of register i and register i+1 for i = 1..m-1.
StateVector bob_entangle(const std::vector<StateVector>& registers);

// C_i = dagger(D_i) * x_conjugate(U_i, c_i)
DiagonalUnitary alice_instruction(int i, const Computation& comp,
                                  const SecretKey& key,
                                  const std::vector<BitString>& s_history);

// s_i = b_i XOR r_i
BitString alice_record_outcome(int i, const BitString& b_i,
                               const SecretKey& key);

// c_{m+1} = XOR of s_k over S_m
BitString classical_output(const std::vector<BitString>& s_history, int m,
                           int n);

// Z^{c_m} X^{c_{m-1} XOR r_m} applied qubitwise (X first, as written).
StateVector alice_final_correction(StateVector state, const BitString& c_m,
                                   const BitString& c_m_minus_1,
                                   const BitString& r_m);

// Bob's compute-side view: registers next_layer..m still unmeasured, with
// register next_layer on the lowest n qubits.
struct BobComputeState {
  int n = 0;
  int m = 0;
  int next_layer = 1;
  StateVector state = StateVector::plus_state(0);
};

BobComputeState bob_receive_registers(const std::vector<StateVector>& regs);

// Applies C_i to register i and measures it in the Hadamard basis. The
// forced overload projects onto a chosen outcome instead of sampling (a
// zero-probability branch leaves a placeholder state and probability 0).
MeasurementBranch bob_layer(int i, const DiagonalUnitary& c_i,
                            BobComputeState& gs, Rng& rng);
MeasurementBranch bob_layer(int i, const DiagonalUnitary& c_i,
                            BobComputeState& gs, const BitString& forced);

// Quantum mode, layer m: applies C_m then H on every qubit of register m and
// hands the register back unmeasured.
StateVector bob_final_layer(int m, const DiagonalUnitary& c_m,
                            BobComputeState& gs);

struct AliceOptions {
  // Overrides key sampling (blindness enumeration, replaying known secrets).
  std::optional<SecretKey> fixed_key;
  // Negative control: truncates every dependency set to its largest element,
  // which must break correctness for m >= 3.
  bool corrupt_dependency_sets = false;
  // Negative control: every layer reuses layer 1's (D, r).
  bool reuse_first_secret = false;
};

struct BobOptions {
  // One outcome per measured layer; replaces sampling for branch enumeration.
  std::optional<std::vector<BitString>> forced_outcomes;
};

// Frame-level state machines. Drive them by draining next_outgoing() and
// feeding the peer's frames to handle_frame(); any out-of-grammar frame
// throws ProtocolError and poisons the session.
class AliceSession {
 public:
  AliceSession(Computation comp, SubgroupSpec spec, uint64_t seed,
               AliceOptions opts = {});

  std::optional<std::vector<uint8_t>> next_outgoing();
  void handle_frame(const std::vector<uint8_t>& frame);
  bool finished() const { return state_ == State::kDone; }

  OutputMode mode() const { return comp_.output_mode; }
  const SecretKey& key() const { return key_; }
  const BitString& classical_result() const;
  const StateVector& quantum_result() const;

 private:
  enum class State { kAwaitOutcomes, kAwaitFinalRegister, kDone };

  BitString corrections(int i) const;
  void push_instruction(int i);

  Computation comp_;
  SubgroupSpec spec_;
  AliceOptions opts_;
  SecretKey key_;
  std::vector<BitString> s_history_;
  std::deque<std::vector<uint8_t>> outbox_;
  State state_ = State::kAwaitOutcomes;
  int await_layer_ = 1;
  std::optional<BitString> classical_result_;
  std::optional<StateVector> quantum_result_;
};

class BobSession {
 public:
  explicit BobSession(uint64_t seed, BobOptions opts = {});

  std::optional<std::vector<uint8_t>> next_outgoing();
  void handle_frame(const std::vector<uint8_t>& frame);
  bool finished() const { return state_ == State::kDone; }

  // Product of the measured branches' probabilities on this run.
  double path_probability() const { return path_probability_; }
  // True when a forced outcome hit a zero-probability branch.
  bool dead_branch() const { return dead_branch_; }

 private:
  enum class State { kAwaitHello, kAwaitRegister, kAwaitInstruction, kDone };

  Rng rng_;
  BobOptions opts_;
  std::deque<std::vector<uint8_t>> outbox_;
  State state_ = State::kAwaitHello;
  uint16_t n_ = 0;
  uint16_t m_ = 0;
  uint8_t mode_ = wire::kModeClassical;
  std::vector<StateVector> pending_registers_;
  BobComputeState compute_;
  double path_probability_ = 1.0;
  bool dead_branch_ = false;
};

}  // namespace gubqc
