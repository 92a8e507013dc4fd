#include "gubqc/session.hpp"

#include <exception>
#include <thread>
#include <utility>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

SessionTranscript transcript_shell(const Computation& comp,
                                   uint64_t alice_seed, uint64_t bob_seed,
                                   const SessionOptions& opts) {
  SessionTranscript t;
  t.n = comp.n;
  t.m = comp.m;
  t.output_mode = comp.output_mode;
  t.alice_seed = alice_seed;
  t.bob_seed = bob_seed;
  t.config_text = opts.config_text;
  return t;
}

void finish_result(SessionResult& result, AliceSession& alice) {
  result.key = alice.key();
  if (alice.mode() == OutputMode::kClassical) {
    result.classical = alice.classical_result();
    result.transcript.classical_output = result.classical;
  } else {
    result.quantum = alice.quantum_result();
    result.transcript.quantum_fingerprint = state_fingerprint(*result.quantum);
  }
}

SessionResult run_in_process(const Computation& comp,
                             const SubgroupSpec& spec, uint64_t alice_seed,
                             uint64_t bob_seed, const SessionOptions& opts) {
  AliceSession alice(comp, spec, alice_seed, opts.alice);
  BobSession bob(bob_seed, opts.bob);

  SessionResult result;
  result.output_mode = comp.output_mode;
  result.transcript = transcript_shell(comp, alice_seed, bob_seed, opts);

  while (!alice.finished() || !bob.finished()) {
    if (auto frame = alice.next_outgoing()) {
      result.transcript.frames.push_back(
          {Direction::kAliceToBob, *frame});
      bob.handle_frame(*frame);
      continue;
    }
    if (auto frame = bob.next_outgoing()) {
      result.transcript.frames.push_back({Direction::kBobToAlice, *frame});
      alice.handle_frame(*frame);
      continue;
    }
    throw ProtocolError("session deadlocked with both parties waiting");
  }
  while (auto frame = bob.next_outgoing()) {
    result.transcript.frames.push_back({Direction::kBobToAlice, *frame});
    alice.handle_frame(*frame);
  }

  finish_result(result, alice);
  result.path_probability = bob.path_probability();
  result.dead_branch = bob.dead_branch();
  return result;
}

SessionResult run_over_socket(const Computation& comp,
                              const SubgroupSpec& spec, uint64_t alice_seed,
                              uint64_t bob_seed, const TransportSpec& tspec,
                              const SessionOptions& opts) {
  TcpListener listener(tspec.host, tspec.port);
  const uint16_t port = listener.port();

  BobRunInfo bob_info;
  std::exception_ptr bob_error;
  std::thread bob_thread([&] {
    try {
      auto server_side = listener.accept_one();
      bob_info = run_bob_over(*server_side, bob_seed, opts.bob);
    } catch (...) {
      bob_error = std::current_exception();
    }
  });

  SessionResult result;
  std::exception_ptr alice_error;
  try {
    auto client_side = TcpTransport::connect_to(tspec.host, port);
    result = run_alice_over(*client_side, comp, spec, alice_seed, bob_seed,
                            opts);
  } catch (...) {
    alice_error = std::current_exception();
  }
  bob_thread.join();
  if (alice_error) std::rethrow_exception(alice_error);
  if (bob_error) std::rethrow_exception(bob_error);

  result.path_probability = bob_info.path_probability;
  result.dead_branch = bob_info.dead_branch;
  return result;
}

}  // namespace

SessionResult run_session(const Computation& comp, const SubgroupSpec& spec,
                          uint64_t alice_seed, uint64_t bob_seed,
                          const TransportSpec& transport,
                          const SessionOptions& opts) {
  if (transport.kind == TransportKind::kInProcess) {
    return run_in_process(comp, spec, alice_seed, bob_seed, opts);
  }
  return run_over_socket(comp, spec, alice_seed, bob_seed, transport, opts);
}

SessionResult run_alice_over(Transport& transport, const Computation& comp,
                             const SubgroupSpec& spec, uint64_t alice_seed,
                             uint64_t bob_seed_hint,
                             const SessionOptions& opts) {
  AliceSession alice(comp, spec, alice_seed, opts.alice);

  SessionResult result;
  result.output_mode = comp.output_mode;
  result.transcript = transcript_shell(comp, alice_seed, bob_seed_hint, opts);

  while (true) {
    while (auto frame = alice.next_outgoing()) {
      result.transcript.frames.push_back({Direction::kAliceToBob, *frame});
      transport.send_frame(*frame);
    }
    if (alice.finished()) break;
    auto frame = transport.recv_frame();
    if (!frame) {
      throw ProtocolError("peer closed before the session finished");
    }
    result.transcript.frames.push_back({Direction::kBobToAlice, *frame});
    alice.handle_frame(*frame);
  }

  finish_result(result, alice);
  return result;
}

BobRunInfo run_bob_over(Transport& transport, uint64_t bob_seed,
                        const BobOptions& opts) {
  BobSession bob(bob_seed, opts);
  while (!bob.finished()) {
    auto frame = transport.recv_frame();
    if (!frame) {
      throw ProtocolError("peer closed before the session finished");
    }
    bob.handle_frame(*frame);
    while (auto out = bob.next_outgoing()) {
      transport.send_frame(*out);
    }
  }
  return {bob.path_probability(), bob.dead_branch()};
}

}  // namespace gubqc
