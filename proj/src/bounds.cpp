#include "gubqc/bounds.hpp"

#include <iomanip>
#include <sstream>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

mpz_class pow2(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

GammaBounds bounds_single_qubit(const Setting& setting, int64_t n_qubits) {
  GammaBounds b;
  b.setting = setting;
  b.N = n_qubits;
  b.lower = n_qubits;
  b.upper = 2 * mpz_class(n_qubits);
  return b;
}

GammaBounds bounds_k_qubit(const Setting& setting, int k, int64_t n_qubits) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (n_qubits % k != 0) {
    throw ConfigError("transmitted qubit count N must be divisible by k (k=" +
                      std::to_string(k) + ", N=" + std::to_string(n_qubits) +
                      ")");
  }
  GammaBounds b;
  b.setting = setting;
  b.N = n_qubits;
  b.lower = mpz_class(n_qubits / k) * (pow2(static_cast<unsigned long>(k)) - 1);
  b.upper = 2 * b.lower;
  return b;
}

GammaBounds bounds_commuting(const Setting& setting, const Commuting& c,
                             int64_t n_qubits) {
  GammaBounds b;
  b.setting = setting;
  b.N = n_qubits;
  if (!c.f_n) {
    b.lower = pow2(static_cast<unsigned long>(n_qubits)) - 1;
    b.upper = b.lower;
    return b;
  }
  const mpz_class& f = *c.f_n;
  if (f < 1) throw ConfigError("gate budget f(N) must be positive");
  if (c.n < 1 || pow2(static_cast<unsigned long>(c.n)) < f) {
    throw ConfigError("register width must satisfy n >= log2 f(N) (n=" +
                      std::to_string(c.n) + ", f(N)=" + f.get_str() + ")");
  }
  if (c.m < 2 || f % (c.m - 1) != 0) {
    throw ConfigError("f(N) must be divisible by m-1 (m=" +
                      std::to_string(c.m) + ", f(N)=" + f.get_str() + ")");
  }
  b.lower = f;
  b.upper = f;
  return b;
}

GammaBounds bounds_memory(const Setting& setting, const MemoryK& mem,
                          int64_t n_qubits) {
  if (mem.k < 1) throw ConfigError("k must be at least 1");
  if (mem.n < mem.k) {
    throw ConfigError("memory setting requires n >= k (k=" +
                      std::to_string(mem.k) + ", n=" + std::to_string(mem.n) +
                      ")");
  }
  if (n_qubits % mem.n != 0) {
    throw ConfigError(
        "transmitted qubit count N must be divisible by the session width n "
        "(n=" +
        std::to_string(mem.n) + ", N=" + std::to_string(n_qubits) + ")");
  }
  if (n_qubits < mem.k) {
    throw ConfigError("transmitted qubit count N must be at least k");
  }
  GammaBounds b;
  b.setting = setting;
  b.N = n_qubits;
  const unsigned long k = static_cast<unsigned long>(mem.k);
  b.lower = mpz_class(n_qubits / mem.n) *
            (pow2(k - 1) * (mem.n - mem.k + 2) - 1);
  b.upper = mpz_class(n_qubits - mem.k) * (pow2(2 * k) - pow2(2 * (k - 1))) +
            pow2(2 * k) - 1;
  return b;
}

}  // namespace

std::string setting_name(const Setting& setting) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeparableSingleQubit>) {
          return "separable-single-qubit";
        } else if constexpr (std::is_same_v<T, SeparableKQubit>) {
          return "separable-k-qubit(k=" + std::to_string(s.k) + ")";
        } else if constexpr (std::is_same_v<T, Commuting>) {
          if (s.f_n) {
            return "commuting(f=" + s.f_n->get_str() +
                   ", n=" + std::to_string(s.n) +
                   ", m=" + std::to_string(s.m) + ")";
          }
          return "commuting";
        } else {
          static_assert(std::is_same_v<T, MemoryK>);
          return "memory-k(k=" + std::to_string(s.k) +
                 ", n=" + std::to_string(s.n) + ")";
        }
      },
      setting);
}

GammaBounds gamma_bounds(const Setting& setting, int64_t N) {
  if (N < 1) throw ConfigError("transmitted qubit count N must be positive");
  return std::visit(
      [&](const auto& s) -> GammaBounds {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeparableSingleQubit>) {
          return bounds_single_qubit(setting, N);
        } else if constexpr (std::is_same_v<T, SeparableKQubit>) {
          return bounds_k_qubit(setting, s.k, N);
        } else if constexpr (std::is_same_v<T, Commuting>) {
          return bounds_commuting(setting, s, N);
        } else {
          static_assert(std::is_same_v<T, MemoryK>);
          return bounds_memory(setting, s, N);
        }
      },
      setting);
}

AchievedRate achieved_rate(const SubgroupSpec& spec, int n, int m,
                           bool count_return_register) {
  if (spec.cyclic_order != 0) {
    throw ConfigError(
        "achieved rate counts free parameters of a continuous family");
  }
  if (spec.block_size < 1 || n < 1 || n % spec.block_size != 0) {
    throw ConfigError("n must be a multiple of k (k=" +
                      std::to_string(spec.block_size) +
                      ", n=" + std::to_string(n) + ")");
  }
  if (m < 1) throw ConfigError("m must be at least 1");

  AchievedRate out;
  const unsigned long k = static_cast<unsigned long>(spec.block_size);
  out.hidden_gates =
      mpz_class(m) * mpz_class(n / spec.block_size) * (pow2(k) - 1);
  out.transmitted_qubits = mpz_class(n) * m;
  if (count_return_register) out.transmitted_qubits += n;
  out.rate = mpq_class(out.hidden_gates, out.transmitted_qubits);
  out.rate.canonicalize();
  return out;
}

ComparisonTable protocol_comparison(int64_t N, int n) {
  if (N < 2 || n < 2) {
    throw ConfigError("comparison requires N >= 2 and n >= 2");
  }
  ComparisonTable table;
  table.N = N;
  table.n = n;
  table.upper = 2 * mpz_class(N);
  const mpq_class upper_q(table.upper);

  const auto add_row = [&](std::string protocol, std::string expression,
                           std::optional<mpq_class> value, std::string note,
                           bool constant_unspecified = false) {
    ComparisonRow row;
    row.protocol = std::move(protocol);
    row.expression = std::move(expression);
    row.note = std::move(note);
    row.constant_unspecified = constant_unspecified;
    if (value) {
      value->canonicalize();
      row.value = *value;
      if (*value > 0) {
        row.gap_vs_upper = upper_q / *value;
        row.gap_vs_upper->canonicalize();
      }
    }
    table.rows.push_back(std::move(row));
  };

  add_row("UBQC-explicit", "3N/4", mpq_class(3 * mpz_class(N), 4),
          "explicit gate construction");
  add_row("UBQC-general", "N", mpq_class(mpz_class(N)),
          "general measurement pattern");
  if (N % n == 0) {
    const AchievedRate gubqc =
        achieved_rate(SubgroupSpec{n, 0}, n, static_cast<int>(N / n), false);
    add_row("GUBQC", "(N/n)(2^n - 1)", mpq_class(gubqc.hidden_gates),
            "full-width blocks, m = N/n sessions");
  } else {
    add_row("GUBQC", "(N/n)(2^n - 1)", std::nullopt,
            "needs N divisible by n");
  }
  add_row("GMMR", "N/log2(n)", std::nullopt,
          "proportionality constant unspecified", true);
  add_row("upper-bound", "2N", upper_q, "single-qubit-setting dimension cap");
  return table;
}

std::string rational_to_decimal(const mpq_class& value, int max_digits) {
  mpq_class v = value;
  v.canonicalize();
  std::string sign;
  if (v < 0) {
    sign = "-";
    v = -v;
  }
  mpz_class integer = v.get_num() / v.get_den();
  mpz_class remainder = v.get_num() % v.get_den();
  std::string digits;
  bool exact = remainder == 0;
  for (int i = 0; i < max_digits && remainder != 0; ++i) {
    remainder *= 10;
    digits += (mpz_class(remainder / v.get_den())).get_str();
    remainder %= v.get_den();
  }
  exact = remainder == 0;
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  std::string out = sign + integer.get_str();
  if (!digits.empty()) out += "." + digits;
  return exact ? out : "~" + out;
}

std::string to_text(const GammaBounds& bounds) {
  std::ostringstream out;
  out << "gamma-bounds setting=" << setting_name(bounds.setting)
      << " N=" << bounds.N << " lower=" << bounds.lower.get_str()
      << " upper=" << bounds.upper.get_str();
  return out.str();
}

std::string to_text(const ComparisonTable& table) {
  std::ostringstream out;
  out << "protocol comparison for N=" << table.N << ", n=" << table.n
      << " (upper bound " << table.upper.get_str() << ")\n";
  size_t name_w = 8, expr_w = 10, value_w = 5, gap_w = 12;
  for (const ComparisonRow& row : table.rows) {
    name_w = std::max(name_w, row.protocol.size());
    expr_w = std::max(expr_w, row.expression.size());
    if (row.value) {
      value_w = std::max(value_w, rational_to_decimal(*row.value).size());
    }
  }
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "protocol"
      << std::setw(static_cast<int>(expr_w) + 2) << "expression"
      << std::setw(static_cast<int>(value_w) + 2) << "value"
      << std::setw(static_cast<int>(gap_w) + 2) << "gap-vs-upper"
      << "note\n";
  for (const ComparisonRow& row : table.rows) {
    std::string value = row.value ? rational_to_decimal(*row.value) : "-";
    std::string gap = "-";
    if (row.gap_vs_upper) {
      gap = row.gap_vs_upper->get_num().get_str();
      if (row.gap_vs_upper->get_den() != 1) {
        gap += "/" + row.gap_vs_upper->get_den().get_str();
      }
    }
    std::string note = row.note;
    if (row.constant_unspecified && note.empty()) {
      note = "proportionality constant unspecified";
    }
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << row.protocol
        << std::setw(static_cast<int>(expr_w) + 2) << row.expression
        << std::setw(static_cast<int>(value_w) + 2) << value
        << std::setw(static_cast<int>(gap_w) + 2) << gap << note << "\n";
  }
  return out.str();
}

}  // namespace gubqc
