#pragma once

#include <vector>

#include "gubqc/statevector.hpp"

namespace gubqc {

// Dense n-qubit density matrix, row-major, same index convention as
// StateVector. Used by the analyzer to average states over secrets.
class DensityMatrix {
 public:
  static DensityMatrix zero(int n);
  static DensityMatrix maximally_mixed(int n);
  static DensityMatrix from_state(const StateVector& psi);
  // Validates dimensions, hermiticity, and unit trace (1e-9).
  static DensityMatrix from_entries(int n, std::vector<cdouble> entries);

  int num_qubits() const { return n_; }
  size_t dim() const { return size_t{1} << n_; }
  cdouble entry(size_t row, size_t col) const;
  const std::vector<cdouble>& entries() const { return entries_; }

  // rho += weight * |psi><psi|
  void accumulate(const StateVector& psi, double weight);
  double trace() const;
  double min_eigenvalue() const;

  // (1/2) * trace norm of (this - other), by hermitian eigensolve.
  double trace_distance(const DensityMatrix& other) const;
  double trace_distance_to_maximally_mixed() const;

 private:
  DensityMatrix(int n, std::vector<cdouble> entries);

  int n_ = 0;
  std::vector<cdouble> entries_;
};

// Sum of w |psi><psi| over the ensemble; weights must be nonnegative and
// sum to 1 within 1e-10.
DensityMatrix density_from_ensemble(
    const std::vector<std::pair<StateVector, double>>& ensemble);

double trace_distance_to_maximally_mixed(const DensityMatrix& rho);

}  // namespace gubqc
