#include "gubqc/diaggroup.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kLatticeTol = 1e-9;
constexpr size_t kEnumerationCap = size_t{1} << 20;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double lattice_angle(uint32_t j, uint32_t q) {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(q);
}

uint32_t angle_to_index(double a, uint32_t q) {
  const double scaled = wrap_angle(a) * static_cast<double>(q) / kTwoPi;
  const long long j = std::llround(scaled);
  if (std::abs(scaled - static_cast<double>(j)) >
      kLatticeTol * static_cast<double>(q)) {
    throw ConfigError("angle " + std::to_string(a) +
                      " is not on the 2*pi/" + std::to_string(q) +
                      " lattice");
  }
  return static_cast<uint32_t>(j % q);
}

void check_spec(const SubgroupSpec& spec, int n) {
  if (n < 1 || n > StateVector::kMaxQubits) {
    throw SizeError("diagonal unitary must act on 1.." +
                    std::to_string(StateVector::kMaxQubits) +
                    " qubits, got " + std::to_string(n));
  }
  if (spec.block_size < 1 || n % spec.block_size != 0) {
    throw ConfigError("n must be a multiple of k (k=" +
                      std::to_string(spec.block_size) +
                      ", n=" + std::to_string(n) + ")");
  }
  if (spec.cyclic_order == 1) {
    throw ConfigError("cyclic order must be 0 (continuous) or at least 2");
  }
}

size_t parameter_count(const SubgroupSpec& spec, int n) {
  return static_cast<size_t>(n / spec.block_size) *
         ((size_t{1} << spec.block_size) - 1);
}

}  // namespace

DiagonalUnitary::DiagonalUnitary(SubgroupSpec spec, int n,
                                 std::vector<std::vector<double>> blocks)
    : spec_(spec), n_(n), blocks_(std::move(blocks)) {}

DiagonalUnitary DiagonalUnitary::identity(const SubgroupSpec& spec, int n) {
  check_spec(spec, n);
  const size_t entries = size_t{1} << spec.block_size;
  return DiagonalUnitary(
      spec, n,
      std::vector<std::vector<double>>(n / spec.block_size,
                                       std::vector<double>(entries, 0.0)));
}

DiagonalUnitary DiagonalUnitary::from_block_angles(
    const SubgroupSpec& spec, int n,
    std::vector<std::vector<double>> blocks) {
  check_spec(spec, n);
  const size_t n_blocks = static_cast<size_t>(n / spec.block_size);
  const size_t entries = size_t{1} << spec.block_size;
  if (blocks.size() != n_blocks) {
    throw ShapeError("expected " + std::to_string(n_blocks) +
                     " blocks, got " + std::to_string(blocks.size()));
  }
  for (auto& block : blocks) {
    if (block.size() != entries) {
      throw ShapeError("expected " + std::to_string(entries) +
                       " angles per block, got " +
                       std::to_string(block.size()));
    }
    for (auto& a : block) {
      a = spec.cyclic_order > 0
              ? lattice_angle(angle_to_index(a, spec.cyclic_order),
                              spec.cyclic_order)
              : wrap_angle(a);
    }
    if (block[0] != 0.0) {
      throw ConfigError("canonical form requires angle 0 in entry 0");
    }
  }
  return DiagonalUnitary(spec, n, std::move(blocks));
}

DiagonalUnitary DiagonalUnitary::from_flat_angles(
    const SubgroupSpec& spec, int n, const std::vector<double>& angles) {
  check_spec(spec, n);
  const size_t n_blocks = static_cast<size_t>(n / spec.block_size);
  const size_t entries = size_t{1} << spec.block_size;
  if (angles.size() != n_blocks * entries) {
    throw ShapeError("expected " + std::to_string(n_blocks * entries) +
                     " angles, got " + std::to_string(angles.size()));
  }
  std::vector<std::vector<double>> blocks(n_blocks);
  for (size_t b = 0; b < n_blocks; ++b) {
    blocks[b].assign(angles.begin() + b * entries,
                     angles.begin() + (b + 1) * entries);
  }
  return from_block_angles(spec, n, std::move(blocks));
}

DiagonalUnitary DiagonalUnitary::sample_uniform(const SubgroupSpec& spec,
                                                int n, Rng& rng) {
  DiagonalUnitary d = identity(spec, n);
  for (auto& block : d.blocks_) {
    for (size_t j = 1; j < block.size(); ++j) {
      block[j] = spec.cyclic_order > 0
                     ? lattice_angle(rng.uniform_int(spec.cyclic_order),
                                     spec.cyclic_order)
                     : wrap_angle(rng.uniform() * kTwoPi);
    }
  }
  return d;
}

std::vector<double> DiagonalUnitary::flat_angles() const {
  std::vector<double> flat;
  flat.reserve(blocks_.size() * blocks_[0].size());
  for (const auto& block : blocks_) {
    flat.insert(flat.end(), block.begin(), block.end());
  }
  return flat;
}

std::vector<uint32_t> DiagonalUnitary::lattice_indices() const {
  if (spec_.cyclic_order == 0) {
    throw ConfigError("lattice indices undefined for continuous angles");
  }
  std::vector<uint32_t> idx;
  idx.reserve(blocks_.size() * blocks_[0].size());
  for (const auto& block : blocks_) {
    for (double a : block) {
      idx.push_back(angle_to_index(a, spec_.cyclic_order));
    }
  }
  return idx;
}

DiagonalUnitary DiagonalUnitary::dagger() const {
  DiagonalUnitary d = *this;
  const uint32_t q = spec_.cyclic_order;
  for (auto& block : d.blocks_) {
    for (auto& a : block) {
      a = q > 0 ? lattice_angle((q - angle_to_index(a, q)) % q, q)
                : wrap_angle(-a);
    }
  }
  return d;
}

DiagonalUnitary DiagonalUnitary::x_conjugated(const BitString& c) const {
  if (c.size != n_) {
    throw ShapeError("conjugation mask length " + std::to_string(c.size) +
                     " does not match " + std::to_string(n_) + " qubits");
  }
  const int k = spec_.block_size;
  const uint64_t local_mask = (uint64_t{1} << k) - 1;
  const uint32_t q = spec_.cyclic_order;
  DiagonalUnitary d = *this;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const uint64_t cb = (c.bits >> (b * k)) & local_mask;
    if (cb == 0) continue;
    const auto& src = blocks_[b];
    auto& dst = d.blocks_[b];
    if (q > 0) {
      const uint32_t base = angle_to_index(src[cb], q);
      for (size_t j = 0; j < src.size(); ++j) {
        const uint32_t idx = angle_to_index(src[j ^ cb], q);
        dst[j] = lattice_angle((idx + q - base) % q, q);
      }
    } else {
      const double base = src[cb];
      for (size_t j = 0; j < src.size(); ++j) {
        dst[j] = wrap_angle(src[j ^ cb] - base);
      }
    }
  }
  return d;
}

std::vector<cdouble> DiagonalUnitary::phase_factors() const {
  const int k = spec_.block_size;
  const uint64_t local_mask = (uint64_t{1} << k) - 1;
  std::vector<cdouble> factors(size_t{1} << n_);
  for (uint64_t i = 0; i < factors.size(); ++i) {
    double sum = 0.0;
    for (size_t b = 0; b < blocks_.size(); ++b) {
      sum += blocks_[b][(i >> (b * k)) & local_mask];
    }
    factors[i] = std::polar(1.0, sum);
  }
  return factors;
}

void DiagonalUnitary::apply_to(StateVector& sv) const {
  if (sv.num_qubits() != n_) {
    throw ShapeError("diagonal unitary on " + std::to_string(n_) +
                     " qubits applied to " +
                     std::to_string(sv.num_qubits()) + "-qubit state");
  }
  sv.apply_phase_factors(phase_factors());
}

DiagonalUnitary operator*(const DiagonalUnitary& a, const DiagonalUnitary& b) {
  if (!(a.spec() == b.spec()) || a.num_qubits() != b.num_qubits()) {
    throw ShapeError("product of diagonal unitaries from different families");
  }
  const uint32_t q = a.spec().cyclic_order;
  std::vector<std::vector<double>> blocks = a.block_angles();
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    for (size_t j = 0; j < blocks[bi].size(); ++j) {
      const double bj = b.block_angles()[bi][j];
      blocks[bi][j] =
          q > 0 ? lattice_angle((angle_to_index(blocks[bi][j], q) +
                                 angle_to_index(bj, q)) %
                                    q,
                                q)
                : wrap_angle(blocks[bi][j] + bj);
    }
  }
  return DiagonalUnitary::from_block_angles(a.spec(), a.num_qubits(),
                                            std::move(blocks));
}

DiagonalUnitary multiply(const DiagonalUnitary& a, const DiagonalUnitary& b) {
  return a * b;
}

DiagonalUnitary dagger(const DiagonalUnitary& d) { return d.dagger(); }

DiagonalUnitary x_conjugate(const DiagonalUnitary& d, const BitString& c) {
  return d.x_conjugated(c);
}

DiagonalUnitary sample_uniform(const SubgroupSpec& spec, int n, Rng& rng) {
  return DiagonalUnitary::sample_uniform(spec, n, rng);
}

StateVector apply_diagonal(StateVector s, const DiagonalUnitary& d) {
  d.apply_to(s);
  return s;
}

size_t free_parameter_count(const SubgroupSpec& spec, int n) {
  check_spec(spec, n);
  if (spec.cyclic_order != 0) {
    throw ConfigError(
        "free parameters are counted for continuous families only");
  }
  return parameter_count(spec, n);
}

size_t subgroup_size(const SubgroupSpec& spec, int n) {
  check_spec(spec, n);
  if (spec.cyclic_order == 0) {
    throw ConfigError("continuous subgroups cannot be enumerated");
  }
  const size_t params = parameter_count(spec, n);
  size_t size = 1;
  for (size_t p = 0; p < params; ++p) {
    if (size > kEnumerationCap / spec.cyclic_order) {
      throw SizeError("subgroup exceeds the 2^20 enumeration cap");
    }
    size *= spec.cyclic_order;
  }
  if (size > kEnumerationCap) {
    throw SizeError("subgroup exceeds the 2^20 enumeration cap");
  }
  return size;
}

std::vector<DiagonalUnitary> enumerate_subgroup(const SubgroupSpec& spec,
                                                int n) {
  const size_t total = subgroup_size(spec, n);
  const size_t params = parameter_count(spec, n);
  const size_t entries = size_t{1} << spec.block_size;
  const uint32_t q = spec.cyclic_order;

  std::vector<DiagonalUnitary> elements;
  elements.reserve(total);
  std::vector<uint32_t> digits(params, 0);
  for (size_t count = 0; count < total; ++count) {
    std::vector<std::vector<double>> blocks(
        static_cast<size_t>(n / spec.block_size),
        std::vector<double>(entries, 0.0));
    size_t p = 0;
    for (auto& block : blocks) {
      for (size_t j = 1; j < entries; ++j) {
        block[j] = lattice_angle(digits[p++], q);
      }
    }
    elements.push_back(
        DiagonalUnitary::from_block_angles(spec, n, std::move(blocks)));
    for (size_t p2 = 0; p2 < params; ++p2) {
      if (++digits[p2] < q) break;
      digits[p2] = 0;
    }
  }
  return elements;
}

ClosureReport verify_closure(const SubgroupSpec& spec, int n) {
  return verify_closure_of(enumerate_subgroup(spec, n));
}

ClosureReport verify_closure_of(const std::vector<DiagonalUnitary>& elements) {
  ClosureReport report;
  report.element_count = elements.size();
  if (elements.empty()) return report;

  const SubgroupSpec spec = elements.front().spec();
  const int n = elements.front().num_qubits();
  const uint32_t q = spec.cyclic_order;
  if (q == 0) {
    throw ConfigError("closure checks need a cyclic (discrete) family");
  }
  std::set<std::vector<uint32_t>> keys;
  for (const auto& e : elements) {
    if (!(e.spec() == spec) || e.num_qubits() != n) {
      throw ShapeError("closure check over mixed families");
    }
    keys.insert(e.lattice_indices());
  }

  const size_t width = elements.front().lattice_indices().size();
  const auto key_text = [](const std::vector<uint32_t>& key) {
    std::string s = "[";
    for (size_t i = 0; i < key.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(key[i]);
    }
    return s + "]";
  };
  const auto note = [&report](const std::string& text) {
    if (report.counterexample.empty()) report.counterexample = text;
  };

  report.contains_identity =
      keys.count(std::vector<uint32_t>(width, 0)) > 0;
  if (!report.contains_identity) note("identity element missing");

  report.product_closed = true;
  std::vector<uint32_t> scratch(width);
  for (const auto& a : keys) {
    for (const auto& b : keys) {
      for (size_t i = 0; i < width; ++i) scratch[i] = (a[i] + b[i]) % q;
      if (!keys.count(scratch)) {
        report.product_closed = false;
        note("product " + key_text(a) + " * " + key_text(b) +
             " escapes the set");
        break;
      }
    }
    if (!report.product_closed) break;
  }

  report.inverse_closed = true;
  for (const auto& a : keys) {
    for (size_t i = 0; i < width; ++i) scratch[i] = (q - a[i]) % q;
    if (!keys.count(scratch)) {
      report.inverse_closed = false;
      note("inverse of " + key_text(a) + " escapes the set");
      break;
    }
  }

  report.x_conjugation_closed = true;
  for (const auto& e : elements) {
    for (uint64_t c = 0; c < (uint64_t{1} << n); ++c) {
      const auto conj = e.x_conjugated(BitString(c, n));
      if (!keys.count(conj.lattice_indices())) {
        report.x_conjugation_closed = false;
        note("X-conjugation of " + key_text(e.lattice_indices()) +
             " by mask " + BitString(c, n).to_string() +
             " escapes the set");
        break;
      }
    }
    if (!report.x_conjugation_closed) break;
  }
  return report;
}

}  // namespace gubqc
