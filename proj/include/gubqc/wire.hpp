#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gubqc/bits.hpp"
#include "gubqc/kernels.hpp"

namespace gubqc {
namespace wire {

// Frame layout, all integers and doubles little-endian:
//   u32 payload length | u8 tag | payload
// The length counts the payload only. Encoding is canonical: a message has
// exactly one byte representation, so transcripts can be compared bytewise.

enum class Tag : uint8_t {
  kHello = 0x01,
  kRegister = 0x02,
  kInstruction = 0x03,
  kOutcomes = 0x04,
  kFinalRegister = 0x05,
};

constexpr uint8_t kModeClassical = 0;
constexpr uint8_t kModeQuantum = 1;

// Session opener: register width n, layer count m, output mode.
struct Hello {
  uint16_t n = 0;
  uint16_t m = 0;
  uint8_t mode = kModeClassical;

  bool operator==(const Hello&) const = default;
};

// One prepared register, 2^n amplitudes as (re, im) f64 pairs.
struct RegisterMsg {
  uint16_t layer = 0;
  uint16_t n = 0;
  std::vector<cdouble> amplitudes;

  bool operator==(const RegisterMsg&) const = default;
};

// One layer instruction: (n/k) blocks of 2^k angles, flat block order.
struct InstructionMsg {
  uint16_t layer = 0;
  uint16_t n = 0;
  uint16_t k = 0;
  std::vector<double> angles;

  bool operator==(const InstructionMsg&) const = default;
};

// Measurement outcomes for one register; bit j lives at byte j/8, bit j%8.
struct OutcomesMsg {
  uint16_t layer = 0;
  BitString outcomes;

  bool operator==(const OutcomesMsg&) const = default;
};

// The unmeasured last register, returned in quantum output mode.
struct FinalRegisterMsg {
  uint16_t n = 0;
  std::vector<cdouble> amplitudes;

  bool operator==(const FinalRegisterMsg&) const = default;
};

using Message =
    std::variant<Hello, RegisterMsg, InstructionMsg, OutcomesMsg,
                 FinalRegisterMsg>;

Tag tag_of(const Message& msg);
const char* tag_name(Tag tag);

std::vector<uint8_t> encode(const Message& msg);

// Decodes one complete frame; rejects truncation, trailing bytes, unknown
// tags, and out-of-range fields with WireError (offsets are frame-relative).
Message decode(const std::vector<uint8_t>& frame);

// Splits a byte stream into frames as data arrives.
class FrameReader {
 public:
  void feed(const uint8_t* data, size_t len);
  std::optional<std::vector<uint8_t>> next_frame();

  // Bytes received but not yet returned as a frame.
  size_t pending_bytes() const { return buffer_.size() - start_; }
  std::vector<uint8_t> pending() const {
    return {buffer_.begin() + static_cast<ptrdiff_t>(start_), buffer_.end()};
  }

 private:
  std::vector<uint8_t> buffer_;
  size_t start_ = 0;
};

}  // namespace wire
}  // namespace gubqc
