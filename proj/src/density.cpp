#include "gubqc/density.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

void check_qubit_count(int n) {
  if (n < 0 || n > StateVector::kMaxQubits) {
    throw SizeError("density qubit count " + std::to_string(n) +
                    " outside [0, " +
                    std::to_string(StateVector::kMaxQubits) + "]");
  }
}

using EigenMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::RowMajor>;

}  // namespace

DensityMatrix::DensityMatrix(int n, std::vector<cdouble> entries)
    : n_(n), entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::zero(int n) {
  check_qubit_count(n);
  const size_t dim = size_t{1} << n;
  return DensityMatrix(n, std::vector<cdouble>(dim * dim, cdouble{0.0, 0.0}));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  DensityMatrix rho = zero(n);
  const size_t dim = rho.dim();
  for (size_t i = 0; i < dim; ++i) {
    rho.entries_[i * dim + i] = 1.0 / static_cast<double>(dim);
  }
  return rho;
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  DensityMatrix rho = zero(psi.num_qubits());
  rho.accumulate(psi, 1.0);
  return rho;
}

DensityMatrix DensityMatrix::from_entries(int n, std::vector<cdouble> entries) {
  check_qubit_count(n);
  const size_t dim = size_t{1} << n;
  if (entries.size() != dim * dim) {
    throw ShapeError("expected " + std::to_string(dim * dim) +
                     " density entries, got " +
                     std::to_string(entries.size()));
  }
  DensityMatrix rho(n, std::move(entries));
  for (size_t r = 0; r < dim; ++r) {
    for (size_t c = r; c < dim; ++c) {
      const cdouble diff =
          rho.entries_[r * dim + c] - std::conj(rho.entries_[c * dim + r]);
      if (std::abs(diff) > 1e-10) {
        throw ShapeError("density matrix is not hermitian");
      }
    }
  }
  if (std::abs(rho.trace() - 1.0) > 1e-10) {
    throw ShapeError("density matrix trace is not 1");
  }
  if (rho.min_eigenvalue() < -1e-10) {
    throw ShapeError("density matrix is not positive semidefinite");
  }
  return rho;
}

cdouble DensityMatrix::entry(size_t row, size_t col) const {
  const size_t d = dim();
  if (row >= d || col >= d) {
    throw ShapeError("density entry index out of range");
  }
  return entries_[row * d + col];
}

void DensityMatrix::accumulate(const StateVector& psi, double weight) {
  if (psi.num_qubits() != n_) {
    throw ShapeError("accumulated state has wrong qubit count");
  }
  const size_t d = dim();
  const auto& a = psi.amplitudes();
  for (size_t r = 0; r < d; ++r) {
    for (size_t c = 0; c < d; ++c) {
      entries_[r * d + c] += weight * a[r] * std::conj(a[c]);
    }
  }
}

double DensityMatrix::trace() const {
  const size_t d = dim();
  double t = 0.0;
  for (size_t i = 0; i < d; ++i) t += entries_[i * d + i].real();
  return t;
}

double DensityMatrix::min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim());
  EigenMat mat(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      mat(r, c) = entries_[r * d + c];
    }
  }
  Eigen::SelfAdjointEigenSolver<EigenMat> solver(mat, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::trace_distance(const DensityMatrix& other) const {
  if (other.n_ != n_) {
    throw ShapeError("trace distance between different qubit counts");
  }
  const auto d = static_cast<Eigen::Index>(dim());
  EigenMat diff(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      diff(r, c) = entries_[r * d + c] - other.entries_[r * d + c];
    }
  }
  Eigen::SelfAdjointEigenSolver<EigenMat> solver(diff,
                                                 Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double DensityMatrix::trace_distance_to_maximally_mixed() const {
  return trace_distance(maximally_mixed(n_));
}

DensityMatrix density_from_ensemble(
    const std::vector<std::pair<StateVector, double>>& ensemble) {
  if (ensemble.empty()) {
    throw ShapeError("ensemble must contain at least one state");
  }
  double total = 0.0;
  for (const auto& [psi, w] : ensemble) {
    (void)psi;
    if (w < 0.0) throw ShapeError("ensemble weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ShapeError("ensemble weights sum to " + std::to_string(total) +
                     ", expected 1");
  }
  DensityMatrix rho = DensityMatrix::zero(ensemble.front().first.num_qubits());
  for (const auto& [psi, w] : ensemble) rho.accumulate(psi, w);
  return rho;
}

double trace_distance_to_maximally_mixed(const DensityMatrix& rho) {
  return rho.trace_distance_to_maximally_mixed();
}

}  // namespace gubqc
