#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "gubqc/analyzer.hpp"
#include "gubqc/errors.hpp"
#include "gubqc/rng.hpp"
#include "gubqc/statevector.hpp"

using namespace gubqc;

namespace {

const double kPi = std::acos(-1.0);

DiagonalUnitary lattice_element(const SubgroupSpec& spec, int n,
                                std::vector<uint32_t> indices) {
  std::vector<double> angles(indices.size());
  for (size_t i = 0; i < indices.size(); ++i)
    angles[i] = 2.0 * kPi * indices[i] / spec.cyclic_order;
  return DiagonalUnitary::from_flat_angles(spec, n, angles);
}

Computation identity_computation(const SubgroupSpec& spec, int n, int m,
                                 OutputMode mode) {
  Computation comp{n, m, {}, mode};
  for (int i = 0; i < m; ++i)
    comp.layers.push_back(DiagonalUnitary::identity(spec, n));
  return comp;
}

}  // namespace

TEST_CASE("reference output of known single-qubit circuits") {
  const SubgroupSpec spec{1, 8};

  auto id1 = identity_computation(spec, 1, 1, OutputMode::kClassical);
  auto ref1 = reference_output(id1);
  // H|+> = |0>
  CHECK(std::abs(ref1.state.amplitude(0) - cdouble(1.0)) < 1e-12);
  CHECK(ref1.classical_distribution.at(BitString{0, 1}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  auto id2 = identity_computation(spec, 1, 2, OutputMode::kClassical);
  auto ref2 = reference_output(id2);
  CHECK(ref2.classical_distribution.at(BitString{0, 1}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ref2.classical_distribution.at(BitString{1, 1}) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // H e^{i pi/2 |1><1|} |+> = ((1+i)|0> + (1-i)|1>)/2
  Computation phase{1, 1, {lattice_element(spec, 1, {0, 2})},
                    OutputMode::kQuantum};
  auto ref3 = reference_output(phase);
  CHECK(std::abs(ref3.state.amplitude(0) - cdouble(0.5, 0.5)) < 1e-12);
  CHECK(std::abs(ref3.state.amplitude(1) - cdouble(0.5, -0.5)) < 1e-12);
}

TEST_CASE("identity layers alternate between plus and zero states") {
  const SubgroupSpec spec{1, 2};
  for (int m = 1; m <= 4; ++m) {
    auto ref =
        reference_output(identity_computation(spec, 2, m, OutputMode::kQuantum));
    auto expected = (m % 2 == 1) ? StateVector::basis_state(2, 0)
                                 : StateVector::plus_state(2);
    CHECK(fidelity_up_to_global_phase(ref.state, expected) > 1.0 - 1e-12);
  }
}

TEST_CASE("correctness verification passes small delegations") {
  const SubgroupSpec spec{1, 8};
  Rng rng(71);
  for (OutputMode mode : {OutputMode::kClassical, OutputMode::kQuantum}) {
    Computation comp{1, 2, {}, mode};
    for (int i = 0; i < 2; ++i) comp.layers.push_back(sample_uniform(spec, 1, rng));
    auto report = verify_correctness(comp, spec, 6);
    CHECK(report.pass);
    CHECK(report.keys_tested == 6);
    CHECK_FALSE(report.sampled_fallback);
    CHECK(report.branches_checked > 0);
    if (mode == OutputMode::kQuantum)
      CHECK(report.worst_fidelity > 1.0 - 1e-9);
    else
      CHECK(report.worst_total_variation < 1e-9);
  }
}

TEST_CASE("correctness verification fails under corrupted dependency sets") {
  // pi/4 layers keep the circuit non-Clifford, so the dropped correction
  // term must surface in the output statistics.
  const SubgroupSpec spec{1, 8};
  Computation comp{1, 4, {}, OutputMode::kClassical};
  for (int i = 0; i < 4; ++i)
    comp.layers.push_back(lattice_element(spec, 1, {0, 1}));
  AliceOptions corrupt;
  corrupt.corrupt_dependency_sets = true;
  auto report = verify_correctness(comp, spec, 4, 0x1234, corrupt);
  CHECK_FALSE(report.pass);
  CHECK(report.worst_total_variation > 0.01);
}

TEST_CASE("exhaustive blindness holds on the discrete lattice") {
  const SubgroupSpec spec{1, 8};
  for (int n = 1; n <= 2; ++n) {
    auto u1 = DiagonalUnitary::identity(spec, n);
    std::vector<uint32_t> flat;
    for (int b = 0; b < n; ++b) {
      flat.push_back(0);
      flat.push_back(b == 0 ? 3 : 6);
    }
    auto u2 = lattice_element(spec, n, flat);
    auto report = verify_blindness_exhaustive(spec, n, {u1, u2});
    CHECK(report.pass);
    CHECK(report.instruction_distribution_deviation == 0.0);
    CHECK(report.state_trace_distance < 1e-10);
    CHECK(report.sample_count > 0);
  }
}

TEST_CASE("exhaustive blindness also covers the two-element group") {
  const SubgroupSpec spec{1, 2};
  auto id = DiagonalUnitary::identity(spec, 1);
  auto z = lattice_element(spec, 1, {0, 1});
  auto report = verify_blindness_exhaustive(spec, 1, {id, z});
  CHECK(report.pass);
}

TEST_CASE("exhaustive blindness rejects continuous families and outsiders") {
  CHECK_THROWS_AS(verify_blindness_exhaustive(
                      SubgroupSpec{1, 0}, 1,
                      {DiagonalUnitary::identity(SubgroupSpec{1, 0}, 1),
                       DiagonalUnitary::identity(SubgroupSpec{1, 0}, 1)}),
                  ConfigError);
}

TEST_CASE("instruction translation is a bijection on the group") {
  // dagger(D) * g visits each element exactly once as D runs over the group;
  // this is the algebraic core of the exhaustive blindness check.
  const SubgroupSpec spec{1, 8};
  auto elements = enumerate_subgroup(spec, 1);
  auto g = lattice_element(spec, 1, {0, 5});
  std::vector<std::vector<uint32_t>> seen;
  for (const auto& d : elements)
    seen.push_back(multiply(d.dagger(), g).lattice_indices());
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(seen.size() == elements.size());
}

TEST_CASE("sampled blindness passes for the continuous family") {
  const SubgroupSpec spec{1, 0};
  Rng rng(73);
  auto u1 = DiagonalUnitary::from_flat_angles(spec, 1, {0.0, 0.3});
  auto u2 = DiagonalUnitary::from_flat_angles(spec, 1, {0.0, 4.1});
  auto report = verify_blindness_sampled(spec, 1, {u1, u2}, 2000, rng);
  CHECK(report.pass);
  CHECK(report.mode == BlindnessMode::kSampled);
  CHECK(report.min_ks_p_value > 0.0);
  CHECK(report.state_trace_distance < report.state_threshold);
}

TEST_CASE("sampled blindness needs a minimum sample count") {
  const SubgroupSpec spec{1, 0};
  Rng rng(74);
  auto u = DiagonalUnitary::identity(spec, 1);
  CHECK_THROWS_AS(verify_blindness_sampled(spec, 1, {u, u}, 10, rng),
                  ConfigError);
}

TEST_CASE("teleportation identity holds over random inputs") {
  Rng rng(75);
  auto report = teleportation_identity_check(25, rng);
  CHECK(report.pass);
  CHECK(report.trials == 25);
  CHECK(report.worst_fidelity > 1.0 - 1e-10);
  CHECK(report.worst_probability_skew < 1e-10);
}

TEST_CASE("cross-layer probe flags a rigged sampler and clears an honest one") {
  const SubgroupSpec spec{1, 8};
  Rng rng(76);
  auto honest = cross_layer_correlation_probe(spec, 2, 400, rng, false);
  CHECK_FALSE(honest.flagged);
  auto rigged = cross_layer_correlation_probe(spec, 2, 400, rng, true);
  CHECK(rigged.flagged);
  CHECK(rigged.distinct_products <= 4);
  CHECK(honest.distinct_products > rigged.distinct_products);
}

TEST_CASE("report renderers name their verdicts") {
  const SubgroupSpec spec{1, 8};
  auto comp = identity_computation(spec, 1, 1, OutputMode::kClassical);
  auto correctness = verify_correctness(comp, spec, 2);
  CHECK(to_text(correctness).find("pass") != std::string::npos);

  Rng rng(77);
  auto teleport = teleportation_identity_check(5, rng);
  CHECK(to_text(teleport).find("trials=5") != std::string::npos);
}
