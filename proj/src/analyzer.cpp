#include "gubqc/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gubqc/density.hpp"
#include "gubqc/errors.hpp"
#include "gubqc/session.hpp"

namespace gubqc {
namespace {

constexpr double kExactTol = 1e-10;
constexpr double kOracleTol = 1e-9;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void check_u_prime(const SubgroupSpec& spec, int n,
                   const DiagonalUnitary& u_prime) {
  if (u_prime.num_qubits() != n || !(u_prime.spec() == spec)) {
    throw ShapeError("U' must act on n qubits with the tested subgroup spec");
  }
}

// Asymptotic two-sided significance of the two-sample Kolmogorov-Smirnov
// statistic (Q_KS of the usual series form).
double ks_significance(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-14) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b,
                     double* d_out) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double va = a[ia];
    const double vb = b[ib];
    if (va <= vb) {
      ++ia;
      while (ia < a.size() && a[ia] == va) ++ia;
    }
    if (vb <= va) {
      ++ib;
      while (ib < b.size() && b[ib] == vb) ++ib;
    }
    d = std::max(d, std::abs(ia / na - ib / nb));
  }
  if (d_out) *d_out = d;
  const double ne = na * nb / (na + nb);
  const double sqrt_ne = std::sqrt(ne);
  return ks_significance((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d);
}

StateVector prepared_state(const DiagonalUnitary& d, const BitString& r) {
  StateVector phi = StateVector::plus_state(d.num_qubits());
  d.apply_to(phi);
  phi.apply_pauli_z(r);
  return phi;
}

std::vector<BitString> forced_from_index(uint64_t tuple, int layers, int n) {
  std::vector<BitString> forced;
  forced.reserve(static_cast<size_t>(layers));
  const uint64_t mask = (uint64_t{1} << n) - 1;
  for (int i = 0; i < layers; ++i) {
    forced.push_back(BitString((tuple >> (i * n)) & mask, n));
  }
  return forced;
}

}  // namespace

ReferenceResult reference_output(const Computation& comp) {
  if (comp.n < 1 || comp.n > StateVector::kMaxQubits) {
    throw SizeError("n must be in 1.." +
                    std::to_string(StateVector::kMaxQubits));
  }
  if (comp.layers.size() != static_cast<size_t>(comp.m)) {
    throw ShapeError("expected m layers");
  }
  ReferenceResult ref;
  ref.state = StateVector::plus_state(comp.n);
  for (const DiagonalUnitary& u : comp.layers) {
    if (u.num_qubits() != comp.n) {
      throw ShapeError("layer width does not match n");
    }
    u.apply_to(ref.state);
    ref.state.apply_hadamard_all();
  }
  for (uint64_t idx = 0; idx < ref.state.size(); ++idx) {
    ref.classical_distribution[BitString(idx, comp.n)] =
        std::norm(ref.state.amplitude(idx));
  }
  return ref;
}

CorrectnessReport verify_correctness(const Computation& comp,
                                     const SubgroupSpec& spec,
                                     int key_samples, uint64_t seed,
                                     const AliceOptions& alice_opts) {
  validate_computation(comp, spec);
  if (key_samples < 1) throw ConfigError("at least one key sample required");

  const ReferenceResult ref = reference_output(comp);
  const int measured_layers =
      comp.output_mode == OutputMode::kClassical ? comp.m : comp.m - 1;
  const int outcome_bits = measured_layers * comp.n;

  CorrectnessReport rep;
  rep.output_mode = comp.output_mode;
  rep.keys_tested = key_samples;
  rep.sampled_fallback = outcome_bits > 16;
  rep.pass = true;

  Rng rng(seed);

  const auto run_forced = [&](const SecretKey& key,
                              const std::vector<BitString>& forced) {
    SessionOptions opts;
    opts.alice = alice_opts;
    opts.alice.fixed_key = key;
    opts.bob.forced_outcomes = forced;
    return run_session(comp, spec, 0, 0, TransportSpec{}, opts);
  };

  if (!rep.sampled_fallback) {
    rep.tolerance = kOracleTol;
    const uint64_t tuples = uint64_t{1} << outcome_bits;
    for (int ks = 0; ks < key_samples; ++ks) {
      const SecretKey key = sample_secret_key(spec, comp.n, comp.m, rng);
      std::map<BitString, double> dist;
      double total_probability = 0.0;
      for (uint64_t tuple = 0; tuple < tuples; ++tuple) {
        const auto result =
            run_forced(key, forced_from_index(tuple, measured_layers, comp.n));
        total_probability += result.path_probability;
        if (result.dead_branch) continue;
        ++rep.branches_checked;
        if (comp.output_mode == OutputMode::kQuantum) {
          const double fid =
              fidelity_up_to_global_phase(*result.quantum, ref.state);
          rep.worst_fidelity = std::min(rep.worst_fidelity, fid);
        } else {
          dist[*result.classical] += result.path_probability;
        }
      }
      if (std::abs(total_probability - 1.0) > kOracleTol) {
        rep.pass = false;
        rep.detail = "branch probabilities sum to " +
                     format_real(total_probability) + " for key " +
                     std::to_string(ks);
      }
      if (comp.output_mode == OutputMode::kClassical) {
        double tv = 0.0;
        for (const auto& [outcome, p_ref] : ref.classical_distribution) {
          const auto it = dist.find(outcome);
          const double p = it == dist.end() ? 0.0 : it->second;
          tv += std::abs(p - p_ref);
        }
        tv *= 0.5;
        rep.worst_total_variation = std::max(rep.worst_total_variation, tv);
      }
    }
  } else {
    // Too many branches to enumerate: sample sessions instead. The classical
    // gate widens to a 3-sigma-style statistical tolerance.
    const int64_t runs = std::max<int64_t>(4096, 64 * key_samples);
    std::map<BitString, double> dist;
    for (int64_t t = 0; t < runs; ++t) {
      const SecretKey key = sample_secret_key(spec, comp.n, comp.m, rng);
      SessionOptions opts;
      opts.alice = alice_opts;
      opts.alice.fixed_key = key;
      const auto result =
          run_session(comp, spec, 0, rng.next_u64(), TransportSpec{}, opts);
      ++rep.branches_checked;
      if (comp.output_mode == OutputMode::kQuantum) {
        rep.worst_fidelity = std::min(
            rep.worst_fidelity,
            fidelity_up_to_global_phase(*result.quantum, ref.state));
      } else {
        dist[*result.classical] += 1.0 / static_cast<double>(runs);
      }
    }
    if (comp.output_mode == OutputMode::kClassical) {
      double tv = 0.0;
      for (const auto& [outcome, p_ref] : ref.classical_distribution) {
        const auto it = dist.find(outcome);
        tv += std::abs((it == dist.end() ? 0.0 : it->second) - p_ref);
      }
      rep.worst_total_variation = 0.5 * tv;
      rep.tolerance =
          3.0 * std::sqrt(static_cast<double>(uint64_t{1} << comp.n) /
                          static_cast<double>(runs));
    } else {
      rep.tolerance = kOracleTol;
    }
  }

  if (comp.output_mode == OutputMode::kQuantum) {
    if (rep.worst_fidelity < 1.0 - kOracleTol) rep.pass = false;
  } else {
    if (rep.worst_total_variation > rep.tolerance) rep.pass = false;
  }
  if (rep.detail.empty()) {
    rep.detail = rep.pass ? "all branches match the reference"
                          : "delegated output deviates from the reference";
  }
  return rep;
}

BlindnessReport verify_blindness_exhaustive(
    const SubgroupSpec& spec, int n,
    const std::pair<DiagonalUnitary, DiagonalUnitary>& u_prime_pair) {
  if (spec.cyclic_order == 0) {
    throw ConfigError(
        "exhaustive blindness verification requires a discrete subgroup");
  }
  check_u_prime(spec, n, u_prime_pair.first);
  check_u_prime(spec, n, u_prime_pair.second);

  const std::vector<DiagonalUnitary> group = enumerate_subgroup(spec, n);
  std::map<std::vector<uint32_t>, size_t> index;
  for (size_t i = 0; i < group.size(); ++i) {
    index[group[i].lattice_indices()] = i;
  }
  for (const DiagonalUnitary& u : {u_prime_pair.first, u_prime_pair.second}) {
    if (!index.count(u.lattice_indices())) {
      throw ConfigError("U' must be an element of the subgroup");
    }
  }

  std::vector<int64_t> counts_a(group.size(), 0);
  std::vector<int64_t> counts_b(group.size(), 0);
  for (const DiagonalUnitary& d : group) {
    const DiagonalUnitary d_dag = d.dagger();
    counts_a[index.at((d_dag * u_prime_pair.first).lattice_indices())]++;
    counts_b[index.at((d_dag * u_prime_pair.second).lattice_indices())]++;
  }

  BlindnessReport rep;
  rep.mode = BlindnessMode::kExhaustive;
  const uint64_t r_count = uint64_t{1} << n;
  rep.sample_count =
      static_cast<int64_t>(group.size() * r_count);
  rep.state_threshold = kExactTol;
  rep.instruction_threshold = 0.0;

  const double uniform_p = 1.0 / static_cast<double>(group.size());
  bool counts_exact = true;
  for (size_t i = 0; i < group.size(); ++i) {
    if (counts_a[i] != 1 || counts_b[i] != 1) counts_exact = false;
    const double pa = counts_a[i] * uniform_p;
    const double pb = counts_b[i] * uniform_p;
    rep.instruction_distribution_deviation =
        std::max({rep.instruction_distribution_deviation,
                  std::abs(pa - uniform_p), std::abs(pb - uniform_p),
                  std::abs(pa - pb)});
  }

  DensityMatrix overall = DensityMatrix::zero(n);
  const double pair_weight =
      1.0 / (static_cast<double>(group.size()) * static_cast<double>(r_count));
  for (const DiagonalUnitary& d : group) {
    DensityMatrix conditional = DensityMatrix::zero(n);
    for (uint64_t r = 0; r < r_count; ++r) {
      const StateVector phi = prepared_state(d, BitString(r, n));
      conditional.accumulate(phi, 1.0 / static_cast<double>(r_count));
      overall.accumulate(phi, pair_weight);
    }
    rep.state_trace_distance =
        std::max(rep.state_trace_distance,
                 conditional.trace_distance_to_maximally_mixed());
  }
  rep.state_trace_distance = std::max(
      rep.state_trace_distance, overall.trace_distance_to_maximally_mixed());

  rep.pass = counts_exact &&
             rep.instruction_distribution_deviation == 0.0 &&
             rep.state_trace_distance < rep.state_threshold;
  std::ostringstream verdict;
  verdict << (rep.pass ? "pass" : "fail")
          << ": instruction multiset deviation "
          << format_real(rep.instruction_distribution_deviation)
          << " (exact uniformity required), state trace distance "
          << format_real(rep.state_trace_distance) << " (threshold "
          << format_real(rep.state_threshold) << ") over "
          << rep.sample_count << " secrets";
  rep.verdict = verdict.str();
  return rep;
}

BlindnessReport verify_blindness_sampled(
    const SubgroupSpec& spec, int n,
    const std::pair<DiagonalUnitary, DiagonalUnitary>& u_prime_pair,
    int64_t samples, Rng& rng) {
  if (samples < 1000) {
    throw ConfigError("sampled blindness verification needs >= 1000 samples");
  }
  check_u_prime(spec, n, u_prime_pair.first);
  check_u_prime(spec, n, u_prime_pair.second);

  const size_t block_dim = size_t{1} << spec.block_size;
  const size_t blocks = static_cast<size_t>(n / spec.block_size);
  const size_t coords = blocks * (block_dim - 1);

  std::vector<std::vector<double>> stream_a(coords), stream_b(coords);
  for (auto& v : stream_a) v.reserve(static_cast<size_t>(samples));
  for (auto& v : stream_b) v.reserve(static_cast<size_t>(samples));

  const auto record = [&](std::vector<std::vector<double>>& stream,
                          const DiagonalUnitary& c) {
    const std::vector<double> flat = c.flat_angles();
    size_t coord = 0;
    for (size_t b = 0; b < blocks; ++b) {
      for (size_t j = 1; j < block_dim; ++j) {
        stream[coord++].push_back(flat[b * block_dim + j]);
      }
    }
  };

  DensityMatrix mean = DensityMatrix::zero(n);
  const double weight = 1.0 / static_cast<double>(samples);
  for (int64_t s = 0; s < samples; ++s) {
    const DiagonalUnitary d_a = DiagonalUnitary::sample_uniform(spec, n, rng);
    const BitString r(rng.uniform_int(uint64_t{1} << n), n);
    mean.accumulate(prepared_state(d_a, r), weight);
    record(stream_a, d_a.dagger() * u_prime_pair.first);
    const DiagonalUnitary d_b = DiagonalUnitary::sample_uniform(spec, n, rng);
    record(stream_b, d_b.dagger() * u_prime_pair.second);
  }

  BlindnessReport rep;
  rep.mode = BlindnessMode::kSampled;
  rep.sample_count = samples;
  rep.state_trace_distance = mean.trace_distance_to_maximally_mixed();
  rep.state_threshold = 3.0 * static_cast<double>(uint64_t{1} << n) /
                        std::sqrt(static_cast<double>(samples));
  rep.instruction_threshold = 0.01 / static_cast<double>(coords);

  for (size_t c = 0; c < coords; ++c) {
    double d_stat = 0.0;
    const double p = ks_two_sample(stream_a[c], stream_b[c], &d_stat);
    rep.instruction_distribution_deviation =
        std::max(rep.instruction_distribution_deviation, d_stat);
    rep.min_ks_p_value = std::min(rep.min_ks_p_value, p);
  }

  rep.pass = rep.state_trace_distance < rep.state_threshold &&
             rep.min_ks_p_value >= rep.instruction_threshold;
  std::ostringstream verdict;
  verdict << (rep.pass ? "pass" : "fail") << ": state trace distance "
          << format_real(rep.state_trace_distance) << " (threshold "
          << format_real(rep.state_threshold) << "), min KS p-value "
          << format_real(rep.min_ks_p_value) << " (significance "
          << format_real(rep.instruction_threshold) << ") over "
          << rep.sample_count << " samples";
  rep.verdict = verdict.str();
  return rep;
}

TeleportReport teleportation_identity_check(int trials, Rng& rng) {
  if (trials < 1) throw ConfigError("at least one trial required");
  TeleportReport rep;
  rep.trials = trials;
  rep.pass = true;
  for (int t = 0; t < trials; ++t) {
    cdouble a(rng.gaussian(), rng.gaussian());
    cdouble b(rng.gaussian(), rng.gaussian());
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm < 1e-6) {
      a = 1.0;
      b = 0.0;
    } else {
      a /= norm;
      b /= norm;
    }
    const StateVector phi = StateVector::from_amplitudes(1, {a, b});

    StateVector joint = tensor(phi, StateVector::plus_state(1));
    joint.apply_cz(0, 1);
    const auto branches = enumerate_hadamard_measurement(joint, {0});
    for (const MeasurementBranch& branch : branches) {
      StateVector expected = phi;
      expected.apply_hadamard(0);
      if (branch.outcome.bit(0)) expected.apply_pauli_x(BitString(1, 1));
      rep.worst_probability_skew = std::max(
          rep.worst_probability_skew, std::abs(branch.probability - 0.5));
      if (!branch.post_state) {
        rep.pass = false;
        continue;
      }
      const double fid =
          fidelity_up_to_global_phase(*branch.post_state, expected);
      rep.worst_fidelity = std::min(rep.worst_fidelity, fid);
    }
  }
  if (rep.worst_fidelity < 1.0 - kExactTol) rep.pass = false;
  return rep;
}

CrossLayerProbe cross_layer_correlation_probe(const SubgroupSpec& spec, int n,
                                              int64_t samples, Rng& rng,
                                              bool reuse_d) {
  if (samples < 1) throw ConfigError("at least one sample required");
  CrossLayerProbe probe;
  probe.samples = samples;

  const DiagonalUnitary u = DiagonalUnitary::sample_uniform(spec, n, rng);
  std::set<std::vector<int64_t>> seen;
  for (int64_t s = 0; s < samples; ++s) {
    const DiagonalUnitary d1 = DiagonalUnitary::sample_uniform(spec, n, rng);
    const DiagonalUnitary d2 =
        reuse_d ? d1 : DiagonalUnitary::sample_uniform(spec, n, rng);
    const BitString c(rng.uniform_int(uint64_t{1} << n), n);
    const DiagonalUnitary c1 = d1.dagger() * u;
    const DiagonalUnitary c2 = d2.dagger() * u.x_conjugated(c);
    const DiagonalUnitary product = c2 * c1.dagger();
    std::vector<int64_t> key;
    for (double angle : product.flat_angles()) {
      key.push_back(std::llround(angle * 1e9));
    }
    seen.insert(std::move(key));
  }
  probe.distinct_products = static_cast<int64_t>(seen.size());
  probe.honest_baseline =
      spec.cyclic_order == 0
          ? samples
          : std::min<int64_t>(samples,
                              static_cast<int64_t>(subgroup_size(spec, n)));
  probe.flagged = 4 * probe.distinct_products <= probe.honest_baseline;
  probe.note =
      "informational cross-layer check outside the per-layer blindness "
      "statement; meaningful when the subgroup size exceeds 2^n";
  return probe;
}

std::string to_text(const CorrectnessReport& report) {
  std::ostringstream out;
  out << "correctness mode=" << output_mode_name(report.output_mode)
      << " keys=" << report.keys_tested
      << " branches=" << report.branches_checked
      << " sampled_fallback=" << (report.sampled_fallback ? "yes" : "no");
  if (report.output_mode == OutputMode::kQuantum) {
    out << " worst_fidelity=" << format_real(report.worst_fidelity);
  } else {
    out << " worst_total_variation="
        << format_real(report.worst_total_variation);
  }
  out << " tolerance=" << format_real(report.tolerance)
      << " verdict=" << (report.pass ? "pass" : "fail");
  if (!report.detail.empty()) out << " detail=\"" << report.detail << "\"";
  return out.str();
}

std::string to_text(const BlindnessReport& report) {
  std::ostringstream out;
  out << "blindness mode="
      << (report.mode == BlindnessMode::kExhaustive ? "exhaustive"
                                                    : "sampled")
      << (report.mode == BlindnessMode::kExhaustive ? " enumeration_size="
                                                    : " sample_count=")
      << report.sample_count
      << " state_trace_distance=" << format_real(report.state_trace_distance)
      << " instruction_distribution_deviation="
      << format_real(report.instruction_distribution_deviation);
  if (report.mode == BlindnessMode::kSampled) {
    out << " min_ks_p_value=" << format_real(report.min_ks_p_value);
  }
  out << " verdict=\"" << report.verdict << "\"";
  return out.str();
}

std::string to_text(const TeleportReport& report) {
  std::ostringstream out;
  out << "teleportation trials=" << report.trials
      << " worst_fidelity=" << format_real(report.worst_fidelity)
      << " worst_probability_skew="
      << format_real(report.worst_probability_skew)
      << " verdict=" << (report.pass ? "pass" : "fail");
  return out.str();
}

std::string to_text(const CrossLayerProbe& report) {
  std::ostringstream out;
  out << "cross-layer-probe samples=" << report.samples
      << " distinct_products=" << report.distinct_products
      << " honest_baseline=" << report.honest_baseline
      << " flagged=" << (report.flagged ? "yes" : "no") << " note=\""
      << report.note << "\"";
  return out.str();
}

}  // namespace gubqc
