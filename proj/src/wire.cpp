#include "gubqc/wire.hpp"

#include <bit>
#include <string>

#include "gubqc/errors.hpp"
#include "gubqc/statevector.hpp"

namespace gubqc {
namespace wire {
namespace {

constexpr size_t kHeaderSize = 5;
constexpr uint32_t kMaxPayload = uint32_t{1} << 20;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  }
}

void put_f64(std::vector<uint8_t>& out, double v) {
  const auto bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<uint8_t>((bits >> (8 * i)) & 0xff));
  }
}

void put_amplitudes(std::vector<uint8_t>& out,
                    const std::vector<cdouble>& amps) {
  for (const auto& a : amps) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
}

struct Cursor {
  const std::vector<uint8_t>& buf;
  size_t pos = 0;

  void require(size_t count, const char* what) const {
    if (pos + count > buf.size()) {
      throw WireError(std::string("truncated frame while reading ") + what,
                      pos);
    }
  }

  uint8_t u8(const char* what) {
    require(1, what);
    return buf[pos++];
  }

  uint16_t u16(const char* what) {
    require(2, what);
    const uint16_t v =
        static_cast<uint16_t>(buf[pos] | (uint16_t{buf[pos + 1]} << 8));
    pos += 2;
    return v;
  }

  uint32_t u32(const char* what) {
    require(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t{buf[pos + i]} << (8 * i);
    pos += 4;
    return v;
  }

  double f64(const char* what) {
    require(8, what);
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= uint64_t{buf[pos + i]} << (8 * i);
    pos += 8;
    return std::bit_cast<double>(bits);
  }
};

uint16_t read_register_width(Cursor& cur) {
  const size_t at = cur.pos;
  const uint16_t n = cur.u16("register width");
  if (n < 1 || n > StateVector::kMaxQubits) {
    throw WireError("register width " + std::to_string(n) +
                    " outside [1, " +
                    std::to_string(StateVector::kMaxQubits) + "]",
                    at);
  }
  return n;
}

std::vector<cdouble> read_amplitudes(Cursor& cur, uint16_t n) {
  std::vector<cdouble> amps(size_t{1} << n);
  for (auto& a : amps) {
    const double re = cur.f64("amplitude");
    const double im = cur.f64("amplitude");
    a = cdouble{re, im};
  }
  return amps;
}

}  // namespace

Tag tag_of(const Message& msg) {
  return std::visit(
      [](const auto& m) -> Tag {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          return Tag::kHello;
        } else if constexpr (std::is_same_v<T, RegisterMsg>) {
          return Tag::kRegister;
        } else if constexpr (std::is_same_v<T, InstructionMsg>) {
          return Tag::kInstruction;
        } else if constexpr (std::is_same_v<T, OutcomesMsg>) {
          return Tag::kOutcomes;
        } else {
          static_assert(std::is_same_v<T, FinalRegisterMsg>);
          return Tag::kFinalRegister;
        }
      },
      msg);
}

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kHello:
      return "hello";
    case Tag::kRegister:
      return "register";
    case Tag::kInstruction:
      return "instruction";
    case Tag::kOutcomes:
      return "outcomes";
    case Tag::kFinalRegister:
      return "final_register";
  }
  return "unknown";
}

std::vector<uint8_t> encode(const Message& msg) {
  std::vector<uint8_t> payload;
  std::visit(
      [&payload](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          put_u16(payload, m.n);
          put_u16(payload, m.m);
          payload.push_back(m.mode);
        } else if constexpr (std::is_same_v<T, RegisterMsg>) {
          put_u16(payload, m.layer);
          put_u16(payload, m.n);
          put_amplitudes(payload, m.amplitudes);
        } else if constexpr (std::is_same_v<T, InstructionMsg>) {
          put_u16(payload, m.layer);
          put_u16(payload, m.n);
          put_u16(payload, m.k);
          for (double a : m.angles) put_f64(payload, a);
        } else if constexpr (std::is_same_v<T, OutcomesMsg>) {
          put_u16(payload, m.layer);
          put_u16(payload, static_cast<uint16_t>(m.outcomes.size));
          const int n_bytes = (m.outcomes.size + 7) / 8;
          for (int b = 0; b < n_bytes; ++b) {
            payload.push_back(
                static_cast<uint8_t>((m.outcomes.bits >> (8 * b)) & 0xff));
          }
        } else if constexpr (std::is_same_v<T, FinalRegisterMsg>) {
          put_u16(payload, m.n);
          put_amplitudes(payload, m.amplitudes);
        }
      },
      msg);

  std::vector<uint8_t> frame;
  frame.reserve(kHeaderSize + payload.size());
  put_u32(frame, static_cast<uint32_t>(payload.size()));
  frame.push_back(static_cast<uint8_t>(tag_of(msg)));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

Message decode(const std::vector<uint8_t>& frame) {
  Cursor cur{frame};
  const uint32_t length = cur.u32("payload length");
  if (length > kMaxPayload) {
    throw WireError("payload length " + std::to_string(length) +
                    " exceeds cap",
                    0);
  }
  const uint8_t tag = cur.u8("tag");
  if (frame.size() != kHeaderSize + length) {
    throw WireError("frame size " + std::to_string(frame.size()) +
                    " does not match declared payload " +
                    std::to_string(length),
                    0);
  }

  Message msg;
  switch (static_cast<Tag>(tag)) {
    case Tag::kHello: {
      Hello m;
      m.n = read_register_width(cur);
      m.m = cur.u16("layer count");
      if (m.m < 1) throw WireError("layer count must be at least 1", cur.pos);
      m.mode = cur.u8("mode");
      if (m.mode != kModeClassical && m.mode != kModeQuantum) {
        throw WireError("unknown output mode " + std::to_string(m.mode),
                        cur.pos - 1);
      }
      msg = m;
      break;
    }
    case Tag::kRegister: {
      RegisterMsg m;
      m.layer = cur.u16("layer");
      m.n = read_register_width(cur);
      m.amplitudes = read_amplitudes(cur, m.n);
      msg = m;
      break;
    }
    case Tag::kInstruction: {
      InstructionMsg m;
      m.layer = cur.u16("layer");
      m.n = read_register_width(cur);
      const size_t k_at = cur.pos;
      m.k = cur.u16("block width");
      if (m.k < 1 || m.n % m.k != 0) {
        throw WireError("block width " + std::to_string(m.k) +
                        " does not divide register width " +
                        std::to_string(m.n),
                        k_at);
      }
      const size_t count = (size_t{m.n} / m.k) << m.k;
      m.angles.resize(count);
      for (auto& a : m.angles) a = cur.f64("angle");
      msg = m;
      break;
    }
    case Tag::kOutcomes: {
      OutcomesMsg m;
      m.layer = cur.u16("layer");
      const uint16_t n = read_register_width(cur);
      const int n_bytes = (n + 7) / 8;
      uint64_t bits = 0;
      for (int b = 0; b < n_bytes; ++b) {
        bits |= uint64_t{cur.u8("outcome bits")} << (8 * b);
      }
      if (n < 64 && (bits >> n) != 0) {
        throw WireError("outcome padding bits must be zero", cur.pos - 1);
      }
      m.outcomes = BitString(bits, n);
      msg = m;
      break;
    }
    case Tag::kFinalRegister: {
      FinalRegisterMsg m;
      m.n = read_register_width(cur);
      m.amplitudes = read_amplitudes(cur, m.n);
      msg = m;
      break;
    }
    default:
      throw WireError("unknown tag " + std::to_string(tag), 4);
  }

  if (cur.pos != frame.size()) {
    throw WireError("trailing bytes after payload", cur.pos);
  }
  return msg;
}

void FrameReader::feed(const uint8_t* data, size_t len) {
  buffer_.insert(buffer_.end(), data, data + len);
}

std::optional<std::vector<uint8_t>> FrameReader::next_frame() {
  if (start_ > 0 && start_ == buffer_.size()) {
    buffer_.clear();
    start_ = 0;
  }
  const size_t avail = buffer_.size() - start_;
  if (avail < kHeaderSize) return std::nullopt;
  uint32_t length = 0;
  for (int i = 0; i < 4; ++i) {
    length |= uint32_t{buffer_[start_ + i]} << (8 * i);
  }
  if (length > kMaxPayload) {
    throw WireError("payload length " + std::to_string(length) +
                    " exceeds cap",
                    start_);
  }
  if (avail < kHeaderSize + length) return std::nullopt;
  std::vector<uint8_t> frame(buffer_.begin() + start_,
                             buffer_.begin() + start_ + kHeaderSize + length);
  start_ += kHeaderSize + length;
  return frame;
}

}  // namespace wire
}  // namespace gubqc
