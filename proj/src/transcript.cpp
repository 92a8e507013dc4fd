#include "gubqc/transcript.hpp"

#include <bit>
#include <charconv>
#include <sstream>
#include <string_view>

#include "gubqc/errors.hpp"
#include "gubqc/wire.hpp"

namespace gubqc {
namespace {

constexpr uint64_t kFnvOffset = 14695981039346656037ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(uint64_t h, const uint8_t* data, size_t len) {
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
  return h;
}

char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xF]; }

std::string to_hex(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(hex_digit(b >> 4));
    out.push_back(hex_digit(b));
  }
  return out;
}

int from_hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<uint8_t> from_hex(std::string_view hex, int line_no) {
  if (hex.size() % 2 != 0) {
    throw ConfigError("transcript line " + std::to_string(line_no) +
                      ": odd hex length");
  }
  std::vector<uint8_t> bytes(hex.size() / 2);
  for (size_t i = 0; i < bytes.size(); ++i) {
    const int hi = from_hex_digit(hex[2 * i]);
    const int lo = from_hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ConfigError("transcript line " + std::to_string(line_no) +
                        ": bad hex digit");
    }
    bytes[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return bytes;
}

uint64_t parse_u64(std::string_view text, int line_no) {
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("transcript line " + std::to_string(line_no) +
                      ": expected an unsigned integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

}  // namespace

uint64_t state_fingerprint(const StateVector& state) {
  uint64_t h = kFnvOffset;
  for (const cdouble& a : state.amplitudes()) {
    const uint64_t re = std::bit_cast<uint64_t>(a.real());
    const uint64_t im = std::bit_cast<uint64_t>(a.imag());
    for (int b = 0; b < 8; ++b) {
      const uint8_t byte = static_cast<uint8_t>(re >> (8 * b));
      h = fnv1a(h, &byte, 1);
    }
    for (int b = 0; b < 8; ++b) {
      const uint8_t byte = static_cast<uint8_t>(im >> (8 * b));
      h = fnv1a(h, &byte, 1);
    }
  }
  return h;
}

std::string render_transcript(const SessionTranscript& t) {
  std::ostringstream out;
  out << "gubqc-transcript v1\n";
  out << "n " << t.n << "\n";
  out << "m " << t.m << "\n";
  out << "mode " << output_mode_name(t.output_mode) << "\n";
  out << "seed-alice " << t.alice_seed << "\n";
  out << "seed-bob " << t.bob_seed << "\n";
  if (!t.config_text.empty()) {
    out << "begin-config\n" << t.config_text;
    if (t.config_text.back() != '\n') out << "\n";
    out << "end-config\n";
  }
  for (const TranscriptFrame& f : t.frames) {
    out << (f.direction == Direction::kAliceToBob ? "frame a->b "
                                                  : "frame b->a ");
    out << to_hex(f.bytes) << "\n";
  }
  if (t.classical_output) {
    out << "output classical " << t.classical_output->to_string() << "\n";
  }
  if (t.quantum_fingerprint) {
    out << "output quantum fingerprint " << *t.quantum_fingerprint << "\n";
  }
  return out.str();
}

SessionTranscript parse_transcript(const std::string& text) {
  SessionTranscript t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  bool in_config = false;
  std::ostringstream config;

  while (std::getline(in, line)) {
    ++line_no;
    if (in_config) {
      if (line == "end-config") {
        in_config = false;
        t.config_text = config.str();
      } else {
        config << line << "\n";
      }
      continue;
    }
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "gubqc-transcript v1") {
        throw ConfigError("transcript line 1: expected header "
                          "'gubqc-transcript v1'");
      }
      saw_header = true;
      continue;
    }

    std::istringstream fields(line);
    std::string key;
    fields >> key;
    std::string rest;
    std::getline(fields, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);

    if (key == "n") {
      t.n = static_cast<int>(parse_u64(rest, line_no));
    } else if (key == "m") {
      t.m = static_cast<int>(parse_u64(rest, line_no));
    } else if (key == "mode") {
      if (rest == "classical") {
        t.output_mode = OutputMode::kClassical;
      } else if (rest == "quantum") {
        t.output_mode = OutputMode::kQuantum;
      } else {
        throw ConfigError("transcript line " + std::to_string(line_no) +
                          ": unknown mode '" + rest + "'");
      }
    } else if (key == "seed-alice") {
      t.alice_seed = parse_u64(rest, line_no);
    } else if (key == "seed-bob") {
      t.bob_seed = parse_u64(rest, line_no);
    } else if (key == "begin-config") {
      in_config = true;
      config.str("");
    } else if (key == "frame") {
      std::istringstream frame_fields(rest);
      std::string dir, hex;
      frame_fields >> dir >> hex;
      TranscriptFrame f;
      if (dir == "a->b") {
        f.direction = Direction::kAliceToBob;
      } else if (dir == "b->a") {
        f.direction = Direction::kBobToAlice;
      } else {
        throw ConfigError("transcript line " + std::to_string(line_no) +
                          ": unknown direction '" + dir + "'");
      }
      f.bytes = from_hex(hex, line_no);
      t.frames.push_back(std::move(f));
    } else if (key == "output") {
      std::istringstream out_fields(rest);
      std::string kind;
      out_fields >> kind;
      if (kind == "classical") {
        std::string bits;
        out_fields >> bits;
        t.classical_output = BitString::from_string(bits);
      } else if (kind == "quantum") {
        std::string word, value;
        out_fields >> word >> value;
        if (word != "fingerprint") {
          throw ConfigError("transcript line " + std::to_string(line_no) +
                            ": expected 'fingerprint'");
        }
        t.quantum_fingerprint = parse_u64(value, line_no);
      } else {
        throw ConfigError("transcript line " + std::to_string(line_no) +
                          ": unknown output kind '" + kind + "'");
      }
    } else {
      throw ConfigError("transcript line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  if (in_config) {
    throw ConfigError("transcript ends inside a config block");
  }
  if (!saw_header) {
    throw ConfigError("transcript is empty");
  }
  return t;
}

uint64_t transcript_hash(const SessionTranscript& t) {
  const std::string text = render_transcript(t);
  return fnv1a(kFnvOffset, reinterpret_cast<const uint8_t*>(text.data()),
               text.size());
}

void validate_grammar(const SessionTranscript& t) {
  size_t pos = 0;
  const auto next = [&](Direction want_dir) -> wire::Message {
    if (pos >= t.frames.size()) {
      throw ProtocolError("transcript ends early at frame " +
                          std::to_string(pos));
    }
    const TranscriptFrame& f = t.frames[pos];
    if (f.direction != want_dir) {
      throw ProtocolError("frame " + std::to_string(pos) +
                          " flows the wrong way");
    }
    ++pos;
    return wire::decode(f.bytes);
  };
  const auto expect = [&](wire::Tag tag, Direction dir) -> wire::Message {
    wire::Message msg = next(dir);
    if (wire::tag_of(msg) != tag) {
      throw ProtocolError(std::string("frame ") + std::to_string(pos - 1) +
                          ": expected " + wire::tag_name(tag) + ", got " +
                          wire::tag_name(wire::tag_of(msg)));
    }
    return msg;
  };

  const auto hello = std::get<wire::Hello>(
      expect(wire::Tag::kHello, Direction::kAliceToBob));
  if (hello.n != t.n || hello.m != t.m) {
    throw ProtocolError("hello does not match the transcript parameters");
  }
  const bool quantum = t.output_mode == OutputMode::kQuantum;
  if ((hello.mode == wire::kModeQuantum) != quantum) {
    throw ProtocolError("hello mode does not match the transcript mode");
  }
  for (int i = 1; i <= t.m; ++i) {
    const auto reg = std::get<wire::RegisterMsg>(
        expect(wire::Tag::kRegister, Direction::kAliceToBob));
    if (reg.layer != i || reg.n != t.n) {
      throw ProtocolError("register " + std::to_string(i) +
                          " has wrong layer or width");
    }
  }
  for (int i = 1; i <= t.m; ++i) {
    const auto ins = std::get<wire::InstructionMsg>(
        expect(wire::Tag::kInstruction, Direction::kAliceToBob));
    if (ins.layer != i || ins.n != t.n) {
      throw ProtocolError("instruction " + std::to_string(i) +
                          " has wrong layer or width");
    }
    if (quantum && i == t.m) {
      const auto fin = std::get<wire::FinalRegisterMsg>(
          expect(wire::Tag::kFinalRegister, Direction::kBobToAlice));
      if (fin.n != t.n) {
        throw ProtocolError("final register has wrong width");
      }
    } else {
      const auto out = std::get<wire::OutcomesMsg>(
          expect(wire::Tag::kOutcomes, Direction::kBobToAlice));
      if (out.layer != i || out.outcomes.size != t.n) {
        throw ProtocolError("outcomes " + std::to_string(i) +
                            " have wrong layer or width");
      }
    }
  }
  if (pos != t.frames.size()) {
    throw ProtocolError("transcript has " +
                        std::to_string(t.frames.size() - pos) +
                        " trailing frames");
  }
}

}  // namespace gubqc
