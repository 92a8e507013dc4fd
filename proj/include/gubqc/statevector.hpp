#pragma once

#include <optional>
#include <vector>

#include "gubqc/bits.hpp"
#include "gubqc/kernels.hpp"
#include "gubqc/rng.hpp"

namespace gubqc {

// Dense n-qubit state, amplitudes indexed with qubit 0 as the least
// significant bit. Hard cap of kMaxQubits keeps every state below 64 KiB.
class StateVector {
 public:
  static constexpr int kMaxQubits = 12;

  static StateVector plus_state(int n);
  static StateVector basis_state(int n, uint64_t index);
  static StateVector from_amplitudes(int n, std::vector<cdouble> amps);

  int num_qubits() const { return n_; }
  size_t size() const { return amps_.size(); }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  cdouble amplitude(uint64_t index) const { return amps_.at(index); }

  void apply_hadamard(int target);
  void apply_hadamard_all();
  void apply_cz(int a, int b);
  void apply_pauli_x(const BitString& mask);
  void apply_pauli_z(const BitString& mask);
  // factors must hold exactly 2^n entries; amp[i] *= factors[i].
  void apply_phase_factors(const std::vector<cdouble>& factors);

  double norm_sq() const;
  void renormalize();

 private:
  StateVector(int n, std::vector<cdouble> amps);

  int n_ = 0;
  std::vector<cdouble> amps_;
};

enum class PauliAxis { kX, kZ };

// Value-style wrappers over the in-place methods above.
StateVector new_plus_state(int n);
StateVector apply_hadamard(StateVector s, int q);
StateVector apply_cz(StateVector s, int q1, int q2);
StateVector apply_pauli(StateVector s, PauliAxis axis, const BitString& mask);

StateVector tensor(const StateVector& low, const StateVector& high);

cdouble inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2 for normalized inputs; insensitive to global phase.
double fidelity_up_to_global_phase(const StateVector& a,
                                   const StateVector& b);

struct MeasurementBranch {
  // Bit j of `outcome` is the result for targets[j].
  BitString outcome;
  double probability = 0.0;
  // Renormalized state over the surviving qubits (original order,
  // compacted). Absent when probability is zero or nothing survives.
  std::optional<StateVector> post_state;
};

// Hadamard-basis measurement of `targets` (strictly ascending): outcome 0
// means |+>, 1 means |->.

// All 2^t branches, outcome index order. Throws SizeError past 2^16.
std::vector<MeasurementBranch> enumerate_hadamard_measurement(
    const StateVector& sv, const std::vector<int>& targets);

// Single branch for a forced outcome.
MeasurementBranch project_hadamard_outcome(const StateVector& sv,
                                           const std::vector<int>& targets,
                                           const BitString& outcome);

// Sample one outcome by sequential collapse; probability is the joint
// probability of the returned outcome.
MeasurementBranch sample_hadamard_measurement(const StateVector& sv,
                                              const std::vector<int>& targets,
                                              Rng& rng);

}  // namespace gubqc
