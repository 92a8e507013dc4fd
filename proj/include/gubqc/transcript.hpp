#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gubqc/bits.hpp"
#include "gubqc/protocol.hpp"

namespace gubqc {

enum class Direction { kAliceToBob, kBobToAlice };

struct TranscriptFrame {
  Direction direction = Direction::kAliceToBob;
  std::vector<uint8_t> bytes;

  bool operator==(const TranscriptFrame&) const = default;
};

// Everything Bob sees on the wire plus the run parameters, recorded on
// Alice's side of the transport so both transports produce identical
// transcripts for the same seeds.
struct SessionTranscript {
  int n = 0;
  int m = 0;
  OutputMode output_mode = OutputMode::kClassical;
  uint64_t alice_seed = 0;
  uint64_t bob_seed = 0;
  std::string config_text;
  std::vector<TranscriptFrame> frames;
  std::optional<BitString> classical_output;
  std::optional<uint64_t> quantum_fingerprint;

  bool operator==(const SessionTranscript&) const = default;
};

// FNV-1a over the little-endian amplitude bytes of the corrected state.
uint64_t state_fingerprint(const StateVector& state);

// Line-oriented text form; render() and parse() round-trip exactly.
std::string render_transcript(const SessionTranscript& t);
SessionTranscript parse_transcript(const std::string& text);

// FNV-1a over the rendered text.
uint64_t transcript_hash(const SessionTranscript& t);

// Decodes every frame and checks the session grammar: hello, m registers,
// then per layer an instruction and its outcomes, with quantum sessions
// ending in instruction + final register. Throws ProtocolError or WireError.
void validate_grammar(const SessionTranscript& t);

}  // namespace gubqc
