#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gubqc/bits.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"

namespace gubqc {

// Family of diagonal unitaries on n qubits: a tensor product of n/k blocks,
// each block diag(e^{i a_0}, ..., e^{i a_{2^k-1}}) on k adjacent qubits.
// cyclic_order q > 0 restricts every angle to the lattice {2*pi*j/q}; q = 0
// means continuous angles. Canonical form fixes a_0 = 0 in every block, so
// elements are compared entrywise (exactly, in the lattice case: angles are
// rebuilt from integer indices after every operation).
struct SubgroupSpec {
  int block_size = 1;
  uint32_t cyclic_order = 0;

  bool operator==(const SubgroupSpec&) const = default;
};

class DiagonalUnitary {
 public:
  static DiagonalUnitary identity(const SubgroupSpec& spec, int n);
  // blocks[b][j] is the angle of entry j of block b (block 0 on the lowest
  // qubits). Angle 0 of every block must be 0; lattice membership is
  // enforced when cyclic_order > 0.
  static DiagonalUnitary from_block_angles(
      const SubgroupSpec& spec, int n,
      std::vector<std::vector<double>> blocks);
  static DiagonalUnitary from_flat_angles(const SubgroupSpec& spec, int n,
                                          const std::vector<double>& angles);
  static DiagonalUnitary sample_uniform(const SubgroupSpec& spec, int n,
                                        Rng& rng);

  const SubgroupSpec& spec() const { return spec_; }
  int num_qubits() const { return n_; }
  int num_blocks() const { return n_ / spec_.block_size; }
  const std::vector<std::vector<double>>& block_angles() const {
    return blocks_;
  }
  std::vector<double> flat_angles() const;
  // Lattice index of every entry, blocks concatenated; cyclic_order > 0 only.
  std::vector<uint32_t> lattice_indices() const;

  DiagonalUnitary dagger() const;
  // X^c (this) X^c, re-canonicalized (a global phase per block is dropped).
  DiagonalUnitary x_conjugated(const BitString& c) const;

  // Diagonal of the full 2^n x 2^n operator.
  std::vector<cdouble> phase_factors() const;
  void apply_to(StateVector& sv) const;

  bool operator==(const DiagonalUnitary&) const = default;

 private:
  DiagonalUnitary(SubgroupSpec spec, int n,
                  std::vector<std::vector<double>> blocks);

  SubgroupSpec spec_;
  int n_ = 0;
  std::vector<std::vector<double>> blocks_;
};

DiagonalUnitary operator*(const DiagonalUnitary& a, const DiagonalUnitary& b);

DiagonalUnitary multiply(const DiagonalUnitary& a, const DiagonalUnitary& b);
DiagonalUnitary dagger(const DiagonalUnitary& d);
DiagonalUnitary x_conjugate(const DiagonalUnitary& d, const BitString& c);
DiagonalUnitary sample_uniform(const SubgroupSpec& spec, int n, Rng& rng);
StateVector apply_diagonal(StateVector s, const DiagonalUnitary& d);

// Real phase parameters per element: (n/k) * (2^k - 1). A manifold
// dimension, so defined for continuous families only.
size_t free_parameter_count(const SubgroupSpec& spec, int n);

// Number of elements when cyclic_order > 0: q^free_parameter_count.
// Throws SizeError past 2^20 and ConfigError for continuous specs.
size_t subgroup_size(const SubgroupSpec& spec, int n);

std::vector<DiagonalUnitary> enumerate_subgroup(const SubgroupSpec& spec,
                                                int n);

struct ClosureReport {
  size_t element_count = 0;
  bool contains_identity = false;
  bool product_closed = false;
  bool inverse_closed = false;
  bool x_conjugation_closed = false;
  // First violation found, empty when the set is a closed group.
  std::string counterexample;

  bool ok() const {
    return contains_identity && product_closed && inverse_closed &&
           x_conjugation_closed;
  }
};

ClosureReport verify_closure(const SubgroupSpec& spec, int n);
ClosureReport verify_closure_of(const std::vector<DiagonalUnitary>& elements);

}  // namespace gubqc
