#include "gubqc/protocol.hpp"

#include <string>
#include <utility>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

constexpr double kDeadBranch = 1e-24;

std::vector<int> low_register_targets(int n) {
  std::vector<int> targets(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) targets[static_cast<size_t>(j)] = j;
  return targets;
}

// C_i acts on register i, which sits on the lowest n qubits of Bob's
// remaining state.
void apply_to_low_qubits(const DiagonalUnitary& d, StateVector& sv) {
  const auto local = d.phase_factors();
  const uint64_t mask = local.size() - 1;
  std::vector<cdouble> full(sv.size());
  for (uint64_t idx = 0; idx < full.size(); ++idx) {
    full[idx] = local[idx & mask];
  }
  sv.apply_phase_factors(full);
}

void check_layer_turn(int i, const BobComputeState& gs) {
  if (i < 1 || i > gs.m) {
    throw ProtocolError("layer " + std::to_string(i) + " outside 1.." +
                        std::to_string(gs.m));
  }
  if (i < gs.next_layer) {
    throw ProtocolError("register " + std::to_string(i) +
                        " was already measured");
  }
  if (i > gs.next_layer) {
    throw ProtocolError("layer " + std::to_string(i) + " arrived before layer " +
                        std::to_string(gs.next_layer));
  }
}

MeasurementBranch advance_layer(int i, BobComputeState& gs,
                                MeasurementBranch branch) {
  const int remaining = (gs.m - i) * gs.n;
  if (branch.post_state) {
    gs.state = *branch.post_state;
  } else {
    gs.state = StateVector::plus_state(remaining);
  }
  gs.next_layer = i + 1;
  return branch;
}

uint8_t wire_mode(OutputMode mode) {
  return mode == OutputMode::kClassical ? wire::kModeClassical
                                        : wire::kModeQuantum;
}

}  // namespace

const char* output_mode_name(OutputMode mode) {
  return mode == OutputMode::kClassical ? "classical" : "quantum";
}

void validate_computation(const Computation& comp, const SubgroupSpec& spec) {
  if (comp.n < 1 || comp.n > StateVector::kMaxQubits) {
    throw SizeError("n must be in 1.." +
                    std::to_string(StateVector::kMaxQubits));
  }
  if (comp.m < 1) {
    throw ConfigError("m must be at least 1");
  }
  if (comp.n * comp.m > StateVector::kMaxQubits) {
    throw SizeError("n*m = " + std::to_string(comp.n * comp.m) +
                    " exceeds the " +
                    std::to_string(StateVector::kMaxQubits) +
                    "-qubit simulator cap");
  }
  if (comp.layers.size() != static_cast<size_t>(comp.m)) {
    throw ShapeError("expected " + std::to_string(comp.m) + " layers, got " +
                     std::to_string(comp.layers.size()));
  }
  for (const auto& u : comp.layers) {
    if (u.num_qubits() != comp.n || !(u.spec() == spec)) {
      throw ConfigError("layer does not match the configured subgroup");
    }
  }
}

SecretKey sample_secret_key(const SubgroupSpec& spec, int n, int m,
                            Rng& rng) {
  SecretKey key;
  key.d.reserve(static_cast<size_t>(m));
  key.r.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    key.r.push_back(BitString(rng.uniform_int(uint64_t{1} << n), n));
    key.d.push_back(DiagonalUnitary::sample_uniform(spec, n, rng));
  }
  return key;
}

std::vector<int> dependency_set(int i) {
  std::vector<int> set;
  for (int k = i; k >= 1; k -= 2) set.push_back(k);
  return set;
}

BitString correction_bits(int i, const std::vector<BitString>& s_history,
                          int n) {
  BitString c = BitString::zeros(n);
  if (i <= 1) return c;
  for (int k : dependency_set(i - 1)) {
    if (static_cast<size_t>(k) > s_history.size()) {
      throw ShapeError("missing history entry s_" + std::to_string(k));
    }
    c = c ^ s_history[static_cast<size_t>(k - 1)];
  }
  return c;
}

StateVector alice_prepare_layer(int i, const SecretKey& key, int n) {
  if (i < 1 || static_cast<size_t>(i) > key.d.size()) {
    throw ShapeError("layer index " + std::to_string(i) +
                     " outside the key");
  }
  StateVector sv = StateVector::plus_state(n);
  key.d[static_cast<size_t>(i - 1)].apply_to(sv);
  sv.apply_pauli_z(key.r[static_cast<size_t>(i - 1)]);
  return sv;
}

StateVector bob_entangle(const std::vector<StateVector>& registers) {
  if (registers.empty()) {
    throw ShapeError("at least one register required");
  }
  const int n = registers.front().num_qubits();
  StateVector joint = registers.front();
  for (size_t i = 1; i < registers.size(); ++i) {
    if (registers[i].num_qubits() != n) {
      throw ShapeError("registers must share one width");
    }
    joint = tensor(joint, registers[i]);
  }
  const int m = static_cast<int>(registers.size());
  for (int i = 0; i + 1 < m; ++i) {
    for (int j = 0; j < n; ++j) {
      joint.apply_cz(i * n + j, (i + 1) * n + j);
    }
  }
  return joint;
}

DiagonalUnitary alice_instruction(int i, const Computation& comp,
                                  const SecretKey& key,
                                  const std::vector<BitString>& s_history) {
  const BitString c_i = correction_bits(i, s_history, comp.n);
  return key.d[static_cast<size_t>(i - 1)].dagger() *
         comp.layers[static_cast<size_t>(i - 1)].x_conjugated(c_i);
}

BitString alice_record_outcome(int i, const BitString& b_i,
                               const SecretKey& key) {
  if (i < 1 || static_cast<size_t>(i) > key.r.size()) {
    throw ShapeError("layer index " + std::to_string(i) +
                     " outside the key");
  }
  return b_i ^ key.r[static_cast<size_t>(i - 1)];
}

BitString classical_output(const std::vector<BitString>& s_history, int m,
                           int n) {
  return correction_bits(m + 1, s_history, n);
}

StateVector alice_final_correction(StateVector state, const BitString& c_m,
                                   const BitString& c_m_minus_1,
                                   const BitString& r_m) {
  state.apply_pauli_x(c_m_minus_1 ^ r_m);
  state.apply_pauli_z(c_m);
  return state;
}

BobComputeState bob_receive_registers(const std::vector<StateVector>& regs) {
  BobComputeState gs;
  gs.n = regs.front().num_qubits();
  gs.m = static_cast<int>(regs.size());
  gs.next_layer = 1;
  gs.state = bob_entangle(regs);
  return gs;
}

MeasurementBranch bob_layer(int i, const DiagonalUnitary& c_i,
                            BobComputeState& gs, Rng& rng) {
  check_layer_turn(i, gs);
  apply_to_low_qubits(c_i, gs.state);
  return advance_layer(
      i, gs,
      sample_hadamard_measurement(gs.state, low_register_targets(gs.n), rng));
}

MeasurementBranch bob_layer(int i, const DiagonalUnitary& c_i,
                            BobComputeState& gs, const BitString& forced) {
  check_layer_turn(i, gs);
  apply_to_low_qubits(c_i, gs.state);
  return advance_layer(
      i, gs,
      project_hadamard_outcome(gs.state, low_register_targets(gs.n), forced));
}

StateVector bob_final_layer(int m, const DiagonalUnitary& c_m,
                            BobComputeState& gs) {
  check_layer_turn(m, gs);
  if (m != gs.m) {
    throw ProtocolError("final layer must be layer m");
  }
  apply_to_low_qubits(c_m, gs.state);
  gs.state.apply_hadamard_all();
  StateVector out = std::move(gs.state);
  gs.state = StateVector::plus_state(0);
  gs.next_layer = m + 1;
  return out;
}

// ---------------------------------------------------------------------------
// Alice's state machine

AliceSession::AliceSession(Computation comp, SubgroupSpec spec, uint64_t seed,
                           AliceOptions opts)
    : comp_(std::move(comp)), spec_(spec), opts_(std::move(opts)) {
  validate_computation(comp_, spec_);
  if (opts_.fixed_key) {
    key_ = *opts_.fixed_key;
  } else {
    Rng rng(seed);
    key_ = sample_secret_key(spec_, comp_.n, comp_.m, rng);
  }
  if (key_.d.size() != static_cast<size_t>(comp_.m) ||
      key_.r.size() != static_cast<size_t>(comp_.m)) {
    throw ShapeError("secret key must hold m (D, r) pairs");
  }
  for (int i = 0; i < comp_.m; ++i) {
    if (key_.d[i].num_qubits() != comp_.n || !(key_.d[i].spec() == spec_) ||
        key_.r[i].size != comp_.n) {
      throw ShapeError("secret key entries must match n and the subgroup");
    }
  }
  if (opts_.reuse_first_secret) {
    for (int i = 1; i < comp_.m; ++i) {
      key_.d[i] = key_.d[0];
      key_.r[i] = key_.r[0];
    }
  }

  outbox_.push_back(wire::encode(wire::Hello{
      static_cast<uint16_t>(comp_.n), static_cast<uint16_t>(comp_.m),
      wire_mode(comp_.output_mode)}));
  for (int i = 1; i <= comp_.m; ++i) {
    outbox_.push_back(wire::encode(wire::RegisterMsg{
        static_cast<uint16_t>(i), static_cast<uint16_t>(comp_.n),
        alice_prepare_layer(i, key_, comp_.n).amplitudes()}));
  }
  push_instruction(1);
  state_ = (comp_.m == 1 && comp_.output_mode == OutputMode::kQuantum)
               ? State::kAwaitFinalRegister
               : State::kAwaitOutcomes;
  await_layer_ = 1;
}

BitString AliceSession::corrections(int i) const {
  if (!opts_.corrupt_dependency_sets) {
    return correction_bits(i, s_history_, comp_.n);
  }
  if (i <= 1) return BitString::zeros(comp_.n);
  return s_history_.at(static_cast<size_t>(i - 2));
}

void AliceSession::push_instruction(int i) {
  const BitString c_i = corrections(i);
  const DiagonalUnitary instr =
      key_.d[static_cast<size_t>(i - 1)].dagger() *
      comp_.layers[static_cast<size_t>(i - 1)].x_conjugated(c_i);
  outbox_.push_back(wire::encode(wire::InstructionMsg{
      static_cast<uint16_t>(i), static_cast<uint16_t>(comp_.n),
      static_cast<uint16_t>(spec_.block_size), instr.flat_angles()}));
}

std::optional<std::vector<uint8_t>> AliceSession::next_outgoing() {
  if (outbox_.empty()) return std::nullopt;
  std::vector<uint8_t> frame = std::move(outbox_.front());
  outbox_.pop_front();
  return frame;
}

void AliceSession::handle_frame(const std::vector<uint8_t>& frame) {
  const wire::Message msg = wire::decode(frame);
  const wire::Tag tag = wire::tag_of(msg);

  if (state_ == State::kAwaitOutcomes && tag == wire::Tag::kOutcomes) {
    const auto& out = std::get<wire::OutcomesMsg>(msg);
    if (out.layer != await_layer_) {
      throw ProtocolError("outcomes for layer " + std::to_string(out.layer) +
                          ", expected layer " + std::to_string(await_layer_));
    }
    if (out.outcomes.size != comp_.n) {
      throw ProtocolError("outcome length does not match n");
    }
    s_history_.push_back(
        alice_record_outcome(await_layer_, out.outcomes, key_));
    if (await_layer_ == comp_.m) {
      classical_result_ = corrections(comp_.m + 1);
      state_ = State::kDone;
      return;
    }
    ++await_layer_;
    push_instruction(await_layer_);
    if (comp_.output_mode == OutputMode::kQuantum &&
        await_layer_ == comp_.m) {
      state_ = State::kAwaitFinalRegister;
    }
    return;
  }

  if (state_ == State::kAwaitFinalRegister &&
      tag == wire::Tag::kFinalRegister) {
    const auto& fin = std::get<wire::FinalRegisterMsg>(msg);
    if (fin.n != comp_.n) {
      throw ProtocolError("final register width does not match n");
    }
    StateVector reg = [&] {
      try {
        return StateVector::from_amplitudes(comp_.n, fin.amplitudes);
      } catch (const ShapeError& e) {
        throw ProtocolError(std::string("bad final register: ") + e.what());
      }
    }();
    const BitString c_m = corrections(comp_.m);
    const BitString c_m1 = corrections(comp_.m - 1);
    quantum_result_ = alice_final_correction(
        std::move(reg), c_m, c_m1, key_.r[static_cast<size_t>(comp_.m - 1)]);
    state_ = State::kDone;
    return;
  }

  throw ProtocolError(std::string("unexpected ") +
                      wire::tag_name(tag) + " frame");
}

const BitString& AliceSession::classical_result() const {
  if (!classical_result_) {
    throw ProtocolError("no classical result available");
  }
  return *classical_result_;
}

const StateVector& AliceSession::quantum_result() const {
  if (!quantum_result_) {
    throw ProtocolError("no quantum result available");
  }
  return *quantum_result_;
}

// ---------------------------------------------------------------------------
// Bob's state machine

BobSession::BobSession(uint64_t seed, BobOptions opts)
    : rng_(seed), opts_(std::move(opts)) {}

std::optional<std::vector<uint8_t>> BobSession::next_outgoing() {
  if (outbox_.empty()) return std::nullopt;
  std::vector<uint8_t> frame = std::move(outbox_.front());
  outbox_.pop_front();
  return frame;
}

void BobSession::handle_frame(const std::vector<uint8_t>& frame) {
  const wire::Message msg = wire::decode(frame);
  const wire::Tag tag = wire::tag_of(msg);

  if (state_ == State::kAwaitHello && tag == wire::Tag::kHello) {
    const auto& hello = std::get<wire::Hello>(msg);
    if (hello.n * hello.m > StateVector::kMaxQubits) {
      throw ProtocolError("n*m = " + std::to_string(hello.n * hello.m) +
                          " exceeds the " +
                          std::to_string(StateVector::kMaxQubits) +
                          "-qubit simulator cap");
    }
    n_ = hello.n;
    m_ = hello.m;
    mode_ = hello.mode;
    pending_registers_.reserve(m_);
    state_ = State::kAwaitRegister;
    return;
  }

  if (state_ == State::kAwaitRegister && tag == wire::Tag::kRegister) {
    const auto& reg = std::get<wire::RegisterMsg>(msg);
    if (reg.layer != pending_registers_.size() + 1) {
      throw ProtocolError("register " + std::to_string(reg.layer) +
                          " out of order");
    }
    if (reg.n != n_) {
      throw ProtocolError("register width does not match hello");
    }
    try {
      pending_registers_.push_back(
          StateVector::from_amplitudes(n_, reg.amplitudes));
    } catch (const ShapeError& e) {
      throw ProtocolError(std::string("bad register: ") + e.what());
    }
    if (pending_registers_.size() == m_) {
      compute_ = bob_receive_registers(pending_registers_);
      pending_registers_.clear();
      state_ = State::kAwaitInstruction;
    }
    return;
  }

  if (state_ == State::kAwaitInstruction && tag == wire::Tag::kInstruction) {
    const auto& ins = std::get<wire::InstructionMsg>(msg);
    const int i = ins.layer;
    if (ins.n != n_) {
      throw ProtocolError("instruction width does not match hello");
    }
    const DiagonalUnitary c = [&] {
      try {
        return DiagonalUnitary::from_flat_angles(
            SubgroupSpec{static_cast<int>(ins.k), 0}, n_, ins.angles);
      } catch (const std::exception& e) {
        throw ProtocolError(std::string("bad instruction: ") + e.what());
      }
    }();

    if (mode_ == wire::kModeQuantum && i == m_) {
      const StateVector final_reg = bob_final_layer(m_, c, compute_);
      outbox_.push_back(wire::encode(
          wire::FinalRegisterMsg{n_, final_reg.amplitudes()}));
      state_ = State::kDone;
      return;
    }

    MeasurementBranch branch = [&] {
      if (opts_.forced_outcomes) {
        if (opts_.forced_outcomes->size() < static_cast<size_t>(i)) {
          throw ShapeError("missing forced outcome for layer " +
                           std::to_string(i));
        }
        return bob_layer(i, c, compute_,
                         (*opts_.forced_outcomes)[static_cast<size_t>(i - 1)]);
      }
      return bob_layer(i, c, compute_, rng_);
    }();
    path_probability_ *= branch.probability;
    if (branch.probability <= kDeadBranch) dead_branch_ = true;
    outbox_.push_back(wire::encode(wire::OutcomesMsg{
        static_cast<uint16_t>(i), branch.outcome}));
    if (i == m_) state_ = State::kDone;
    return;
  }

  throw ProtocolError(std::string("unexpected ") + wire::tag_name(tag) +
                      " frame");
}

}  // namespace gubqc
