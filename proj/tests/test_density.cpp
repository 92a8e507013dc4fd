#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "gubqc/density.hpp"
#include "gubqc/errors.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"
#include "support.hpp"

using namespace gubqc;

TEST_CASE("pure two-qubit state sits at trace distance 3/4 from the maximally mixed state") {
  Rng rng(31);
  auto psi = testsupport::random_state(2, rng);
  auto rho = DensityMatrix::from_state(psi);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  // Eigenvalues of rho - I/4 are 3/4 and -1/4 (x3).
  CHECK(trace_distance_to_maximally_mixed(rho) ==
        doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("uniform basis ensemble is maximally mixed") {
  std::vector<std::pair<StateVector, double>> ensemble;
  for (uint64_t i = 0; i < 4; ++i)
    ensemble.emplace_back(StateVector::basis_state(2, i), 0.25);
  auto rho = density_from_ensemble(ensemble);
  CHECK(rho.trace_distance(DensityMatrix::maximally_mixed(2)) < 1e-12);
  CHECK(trace_distance_to_maximally_mixed(rho) < 1e-12);
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("averaging |+> over a random Z flip erases the phase information") {
  auto plus = StateVector::plus_state(1);
  auto flipped = apply_pauli(plus, PauliAxis::kZ, BitString{1, 1});
  auto rho = density_from_ensemble({{plus, 0.5}, {flipped, 0.5}});
  CHECK(trace_distance_to_maximally_mixed(rho) < 1e-12);
}

TEST_CASE("accumulate agrees with the ensemble constructor") {
  Rng rng(32);
  auto a = testsupport::random_state(2, rng);
  auto b = testsupport::random_state(2, rng);
  auto direct = density_from_ensemble({{a, 0.3}, {b, 0.7}});
  auto built = DensityMatrix::zero(2);
  built.accumulate(a, 0.3);
  built.accumulate(b, 0.7);
  CHECK(built.trace_distance(direct) < 1e-12);
}

TEST_CASE("from_entries rejects malformed matrices") {
  // Non-hermitian off-diagonal pair.
  CHECK_THROWS_AS(DensityMatrix::from_entries(
                      1, {cdouble(0.5), cdouble(0.3), cdouble(0.1),
                          cdouble(0.5)}),
                  ShapeError);
  // Trace 2.
  CHECK_THROWS_AS(DensityMatrix::from_entries(
                      1, {cdouble(1.0), cdouble(0.0), cdouble(0.0),
                          cdouble(1.0)}),
                  ShapeError);
  // Hermitian, unit trace, but indefinite.
  CHECK_THROWS_AS(DensityMatrix::from_entries(
                      1, {cdouble(1.2), cdouble(0.0), cdouble(0.0),
                          cdouble(-0.2)}),
                  ShapeError);
  // Wrong entry count.
  CHECK_THROWS_AS(DensityMatrix::from_entries(1, {cdouble(1.0)}), ShapeError);
}

TEST_CASE("ensemble weights are validated") {
  auto s = StateVector::plus_state(1);
  CHECK_THROWS_AS(density_from_ensemble({{s, 0.6}, {s, 0.6}}), ShapeError);
  CHECK_THROWS_AS(density_from_ensemble({{s, -0.5}, {s, 1.5}}), ShapeError);
}

TEST_CASE("trace distance between orthogonal pure states is 1") {
  auto r0 = DensityMatrix::from_state(StateVector::basis_state(1, 0));
  auto r1 = DensityMatrix::from_state(StateVector::basis_state(1, 1));
  CHECK(r0.trace_distance(r1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r0.trace_distance(r0) < 1e-12);
}
