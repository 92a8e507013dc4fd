#include "gubqc/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

constexpr double kDeadBranch = 1e-24;

void check_qubit_count(int n) {
  if (n < 0 || n > StateVector::kMaxQubits) {
    throw SizeError("qubit count " + std::to_string(n) + " outside [0, " +
                    std::to_string(StateVector::kMaxQubits) + "]");
  }
}

uint64_t compact_index(uint64_t i, uint64_t keep_mask) {
  uint64_t r = 0;
  int out = 0;
  for (uint64_t m = keep_mask; m; m &= m - 1) {
    r |= ((i >> std::countr_zero(m)) & 1u) << out;
    ++out;
  }
  return r;
}

void check_targets(const StateVector& sv, const std::vector<int>& targets) {
  int prev = -1;
  for (int t : targets) {
    if (t <= prev) {
      throw ShapeError("measurement targets must be strictly ascending");
    }
    if (t >= sv.num_qubits()) {
      throw ShapeError("measurement target " + std::to_string(t) +
                       " out of range for " +
                       std::to_string(sv.num_qubits()) + " qubits");
    }
    prev = t;
  }
}

// `h` must already have H applied on every target.
MeasurementBranch project_prepared(const StateVector& h,
                                   const std::vector<int>& targets,
                                   const BitString& outcome) {
  uint64_t fixed_mask = 0;
  uint64_t fixed_vals = 0;
  for (size_t j = 0; j < targets.size(); ++j) {
    fixed_mask |= uint64_t{1} << targets[j];
    if (outcome.bit(static_cast<int>(j))) {
      fixed_vals |= uint64_t{1} << targets[j];
    }
  }
  const uint64_t keep_mask =
      (~fixed_mask) & ((uint64_t{1} << h.num_qubits()) - 1);
  const int n_keep = std::popcount(keep_mask);

  std::vector<cdouble> reduced(size_t{1} << n_keep, cdouble{0.0, 0.0});
  double prob = 0.0;
  const auto& amps = h.amplitudes();
  for (uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & fixed_mask) != fixed_vals) continue;
    prob += std::norm(amps[i]);
    reduced[compact_index(i, keep_mask)] = amps[i];
  }

  MeasurementBranch branch;
  branch.outcome = outcome;
  branch.probability = prob;
  if (n_keep > 0 && prob > kDeadBranch) {
    const double s = 1.0 / std::sqrt(prob);
    for (auto& a : reduced) a *= s;
    branch.post_state = StateVector::from_amplitudes(n_keep, std::move(reduced));
  }
  return branch;
}

}  // namespace

StateVector::StateVector(int n, std::vector<cdouble> amps)
    : n_(n), amps_(std::move(amps)) {}

StateVector StateVector::plus_state(int n) {
  check_qubit_count(n);
  const size_t dim = size_t{1} << n;
  return StateVector(n, std::vector<cdouble>(
                            dim, cdouble{1.0 / std::sqrt(double(dim)), 0.0}));
}

StateVector StateVector::basis_state(int n, uint64_t index) {
  check_qubit_count(n);
  const size_t dim = size_t{1} << n;
  if (index >= dim) {
    throw ShapeError("basis index " + std::to_string(index) +
                     " out of range for " + std::to_string(n) + " qubits");
  }
  std::vector<cdouble> amps(dim, cdouble{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(n, std::move(amps));
}

StateVector StateVector::from_amplitudes(int n, std::vector<cdouble> amps) {
  check_qubit_count(n);
  if (amps.size() != size_t{1} << n) {
    throw ShapeError("expected " + std::to_string(size_t{1} << n) +
                     " amplitudes, got " + std::to_string(amps.size()));
  }
  StateVector sv(n, std::move(amps));
  if (std::abs(std::sqrt(sv.norm_sq()) - 1.0) > 1e-12) {
    throw ShapeError("amplitudes are not normalized");
  }
  return sv;
}

void StateVector::apply_hadamard(int target) {
  if (target < 0 || target >= n_) {
    throw ShapeError("hadamard target " + std::to_string(target) +
                     " out of range");
  }
  kernels::active_kernels().hadamard(amps_.data(), amps_.size(), target);
}

void StateVector::apply_hadamard_all() {
  for (int q = 0; q < n_; ++q) apply_hadamard(q);
}

void StateVector::apply_cz(int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw ShapeError("cz targets (" + std::to_string(a) + ", " +
                     std::to_string(b) + ") invalid");
  }
  const uint64_t mask = (uint64_t{1} << a) | (uint64_t{1} << b);
  kernels::active_kernels().cz_mask(amps_.data(), amps_.size(), mask);
}

void StateVector::apply_pauli_x(const BitString& mask) {
  if (mask.size != n_) {
    throw ShapeError("pauli mask length " + std::to_string(mask.size) +
                     " does not match " + std::to_string(n_) + " qubits");
  }
  if (!mask.any()) return;
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    const uint64_t j = i ^ mask.bits;
    if (i < j) std::swap(amps_[i], amps_[j]);
  }
}

void StateVector::apply_pauli_z(const BitString& mask) {
  if (mask.size != n_) {
    throw ShapeError("pauli mask length " + std::to_string(mask.size) +
                     " does not match " + std::to_string(n_) + " qubits");
  }
  kernels::active_kernels().z_mask(amps_.data(), amps_.size(), mask.bits);
}

void StateVector::apply_phase_factors(const std::vector<cdouble>& factors) {
  if (factors.size() != amps_.size()) {
    throw ShapeError("phase table has " + std::to_string(factors.size()) +
                     " entries, state has " + std::to_string(amps_.size()));
  }
  kernels::active_kernels().phase_mul(amps_.data(), amps_.size(),
                                      factors.data());
}

double StateVector::norm_sq() const {
  return kernels::active_kernels().norm_sq(amps_.data(), amps_.size());
}

void StateVector::renormalize() {
  const double nsq = norm_sq();
  if (nsq <= kDeadBranch) {
    throw ShapeError("cannot renormalize a zero state");
  }
  kernels::active_kernels().scale(amps_.data(), amps_.size(),
                                  1.0 / std::sqrt(nsq));
}

StateVector new_plus_state(int n) { return StateVector::plus_state(n); }

StateVector apply_hadamard(StateVector s, int q) {
  s.apply_hadamard(q);
  return s;
}

StateVector apply_cz(StateVector s, int q1, int q2) {
  s.apply_cz(q1, q2);
  return s;
}

StateVector apply_pauli(StateVector s, PauliAxis axis, const BitString& mask) {
  if (axis == PauliAxis::kX) {
    s.apply_pauli_x(mask);
  } else {
    s.apply_pauli_z(mask);
  }
  return s;
}

StateVector tensor(const StateVector& low, const StateVector& high) {
  const int n = low.num_qubits() + high.num_qubits();
  check_qubit_count(n);
  std::vector<cdouble> amps(size_t{1} << n);
  const auto& lo = low.amplitudes();
  const auto& hi = high.amplitudes();
  for (size_t ih = 0; ih < hi.size(); ++ih) {
    for (size_t il = 0; il < lo.size(); ++il) {
      amps[(ih << low.num_qubits()) | il] = lo[il] * hi[ih];
    }
  }
  return StateVector::from_amplitudes(n, std::move(amps));
}

cdouble inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ShapeError("inner product of states with different qubit counts");
  }
  cdouble acc{0.0, 0.0};
  for (size_t i = 0; i < a.size(); ++i) {
    acc += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return acc;
}

double fidelity_up_to_global_phase(const StateVector& a,
                                   const StateVector& b) {
  return std::norm(inner_product(a, b));
}

std::vector<MeasurementBranch> enumerate_hadamard_measurement(
    const StateVector& sv, const std::vector<int>& targets) {
  check_targets(sv, targets);
  if (targets.size() > 16) {
    throw SizeError("enumerating " + std::to_string(targets.size()) +
                    " measured qubits exceeds the 2^16 branch cap");
  }
  StateVector h = sv;
  for (int t : targets) h.apply_hadamard(t);

  const int t = static_cast<int>(targets.size());
  std::vector<MeasurementBranch> branches;
  branches.reserve(size_t{1} << t);
  for (uint64_t o = 0; o < (uint64_t{1} << t); ++o) {
    branches.push_back(project_prepared(h, targets, BitString(o, t)));
  }
  return branches;
}

MeasurementBranch project_hadamard_outcome(const StateVector& sv,
                                           const std::vector<int>& targets,
                                           const BitString& outcome) {
  check_targets(sv, targets);
  if (outcome.size != static_cast<int>(targets.size())) {
    throw ShapeError("outcome length does not match target count");
  }
  StateVector h = sv;
  for (int t : targets) h.apply_hadamard(t);
  return project_prepared(h, targets, outcome);
}

MeasurementBranch sample_hadamard_measurement(const StateVector& sv,
                                              const std::vector<int>& targets,
                                              Rng& rng) {
  check_targets(sv, targets);
  StateVector cur = sv;
  BitString outcome = BitString::zeros(static_cast<int>(targets.size()));
  double joint = 1.0;
  for (size_t j = 0; j < targets.size(); ++j) {
    // Earlier collapses each removed one lower-positioned qubit.
    const int q = targets[j] - static_cast<int>(j);
    cur.apply_hadamard(q);
    double p0 = 0.0;
    const auto& amps = cur.amplitudes();
    for (uint64_t i = 0; i < amps.size(); ++i) {
      if (!((i >> q) & 1u)) p0 += std::norm(amps[i]);
    }
    int bit = rng.uniform() < p0 ? 0 : 1;
    double p_bit = bit ? 1.0 - p0 : p0;
    if (p_bit <= kDeadBranch) {
      bit ^= 1;
      p_bit = 1.0 - p_bit;
    }
    outcome.set_bit(static_cast<int>(j), bit);
    joint *= p_bit;

    const uint64_t keep_mask =
        (~(uint64_t{1} << q)) & ((uint64_t{1} << cur.num_qubits()) - 1);
    const double s = 1.0 / std::sqrt(p_bit);
    std::vector<cdouble> reduced(amps.size() >> 1, cdouble{0.0, 0.0});
    for (uint64_t i = 0; i < amps.size(); ++i) {
      if (((i >> q) & 1u) == static_cast<uint64_t>(bit)) {
        reduced[compact_index(i, keep_mask)] = amps[i] * s;
      }
    }
    cur = StateVector::from_amplitudes(cur.num_qubits() - 1,
                                       std::move(reduced));
  }

  MeasurementBranch branch;
  branch.outcome = outcome;
  branch.probability = joint;
  if (cur.num_qubits() > 0) branch.post_state = std::move(cur);
  return branch;
}

}  // namespace gubqc
