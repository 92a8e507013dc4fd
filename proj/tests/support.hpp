#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"

// Dense-matrix mini oracle: O(4^n) reference implementations used only to
// cross-check the simulator, kept deliberately naive.
namespace testsupport {

using gubqc::cdouble;
using Matrix = std::vector<std::vector<cdouble>>;

inline Matrix identity_matrix(int n) {
  const size_t dim = size_t{1} << n;
  Matrix m(dim, std::vector<cdouble>(dim, 0.0));
  for (size_t i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix hadamard_on(int n, int target) {
  const size_t dim = size_t{1} << n;
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m(dim, std::vector<cdouble>(dim, 0.0));
  for (size_t col = 0; col < dim; ++col) {
    const size_t bit = (col >> target) & 1;
    m[col][col] = bit ? -s : s;
    m[col ^ (size_t{1} << target)][col] = s;
  }
  return m;
}

inline Matrix cz_on(int n, int a, int b) {
  const size_t dim = size_t{1} << n;
  Matrix m(dim, std::vector<cdouble>(dim, 0.0));
  for (size_t i = 0; i < dim; ++i) {
    const bool both = ((i >> a) & 1) && ((i >> b) & 1);
    m[i][i] = both ? -1.0 : 1.0;
  }
  return m;
}

inline Matrix diagonal_matrix(const std::vector<cdouble>& phases) {
  Matrix m(phases.size(), std::vector<cdouble>(phases.size(), 0.0));
  for (size_t i = 0; i < phases.size(); ++i) m[i][i] = phases[i];
  return m;
}

inline std::vector<cdouble> apply_matrix(const Matrix& m,
                                         const std::vector<cdouble>& v) {
  std::vector<cdouble> out(m.size(), 0.0);
  for (size_t r = 0; r < m.size(); ++r) {
    for (size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  }
  return out;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const size_t dim = a.size();
  Matrix out(dim, std::vector<cdouble>(dim, 0.0));
  for (size_t r = 0; r < dim; ++r) {
    for (size_t k = 0; k < dim; ++k) {
      if (a[r][k] == cdouble(0.0)) continue;
      for (size_t c = 0; c < dim; ++c) out[r][c] += a[r][k] * b[k][c];
    }
  }
  return out;
}

inline gubqc::StateVector random_state(int n, gubqc::Rng& rng) {
  const size_t dim = size_t{1} << n;
  std::vector<cdouble> amps(dim);
  double norm_sq = 0.0;
  for (auto& a : amps) {
    a = cdouble(rng.gaussian(), rng.gaussian());
    norm_sq += std::norm(a);
  }
  const double s = 1.0 / std::sqrt(norm_sq);
  for (auto& a : amps) a *= s;
  return gubqc::StateVector::from_amplitudes(n, amps);
}

inline double max_abs_diff(const std::vector<cdouble>& a,
                           const std::vector<cdouble>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

struct OracleBranch {
  uint64_t outcome = 0;
  double probability = 0.0;
  std::vector<cdouble> post;  // compacted to surviving qubits
};

// Brute-force Hadamard-basis measurement: apply single-qubit H matrices to
// the targets, then project on each computational outcome and compact.
inline std::vector<OracleBranch> oracle_hadamard_measurement(
    std::vector<cdouble> amps, int n, const std::vector<int>& targets) {
  for (int t : targets) {
    Matrix h = hadamard_on(n, t);
    amps = apply_matrix(h, amps);
  }
  uint64_t target_mask = 0;
  for (int t : targets) target_mask |= uint64_t{1} << t;

  std::vector<OracleBranch> branches;
  const uint64_t combos = uint64_t{1} << targets.size();
  for (uint64_t outcome = 0; outcome < combos; ++outcome) {
    uint64_t fixed = 0;
    for (size_t j = 0; j < targets.size(); ++j) {
      if ((outcome >> j) & 1) fixed |= uint64_t{1} << targets[j];
    }
    OracleBranch branch;
    branch.outcome = outcome;
    std::vector<cdouble> post;
    for (uint64_t i = 0; i < amps.size(); ++i) {
      if ((i & target_mask) != fixed) continue;
      branch.probability += std::norm(amps[i]);
      post.push_back(amps[i]);
    }
    if (branch.probability > 1e-24) {
      const double s = 1.0 / std::sqrt(branch.probability);
      for (auto& a : post) a *= s;
      branch.post = std::move(post);
    }
    branches.push_back(std::move(branch));
  }
  return branches;
}

}  // namespace testsupport
