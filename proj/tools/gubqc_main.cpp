#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gubqc/analyzer.hpp"
#include "gubqc/bounds.hpp"
#include "gubqc/config.hpp"
#include "gubqc/errors.hpp"
#include "gubqc/session.hpp"
#include "gubqc/transcript.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gubqc::ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw gubqc::ConfigError("cannot write file: " + path);
  out << content;
}

gubqc::RunConfig load_config(const std::string& path) {
  return gubqc::parse_config(read_file(gubqc::resolve_config_path(path)));
}

std::string config_key_footer() {
  std::ostringstream out;
  out << "Config keys:\n";
  for (const auto& doc : gubqc::config_key_docs()) {
    out << "  " << doc.key << ": " << doc.doc << "\n";
  }
  out << "Relative --config paths also resolve against $GUBQC_CONFIG_DIR.\n";
  return out.str();
}

struct CommonFlags {
  std::string config_path;
  std::string format = "text";
  std::string out_path;
  uint64_t seed_alice = 0;
  uint64_t seed_bob = 0;
  bool seed_alice_set = false;
  bool seed_bob_set = false;
};

void apply_overrides(gubqc::RunConfig& config, const CommonFlags& flags) {
  if (flags.seed_alice_set) config.seed_alice = flags.seed_alice;
  if (flags.seed_bob_set) config.seed_bob = flags.seed_bob;
  if (!flags.out_path.empty()) config.out_path = flags.out_path;
}

json result_to_json(const gubqc::SessionResult& result, double fidelity,
                    uint64_t hash) {
  json j;
  j["mode"] = gubqc::output_mode_name(result.output_mode);
  if (result.classical) j["classical_output"] = result.classical->to_string();
  if (result.quantum) {
    j["state_fingerprint"] = *result.transcript.quantum_fingerprint;
    j["fidelity"] = fidelity;
  }
  j["transcript_hash"] = hash;
  return j;
}

int do_run_like(const gubqc::RunConfig& config,
                const gubqc::TransportSpec& transport,
                const std::string& format, bool over_connect,
                const std::string& host, uint16_t port) {
  const gubqc::Computation comp = gubqc::materialize(config);
  gubqc::SessionOptions opts;
  opts.config_text = gubqc::canonical_text(config);

  gubqc::SessionResult result;
  if (over_connect) {
    auto client = gubqc::TcpTransport::connect_to(host, port);
    result = gubqc::run_alice_over(*client, comp, config.subgroup,
                                   config.seed_alice, config.seed_bob, opts);
  } else {
    result = gubqc::run_session(comp, config.subgroup, config.seed_alice,
                                config.seed_bob, transport, opts);
  }

  if (!config.out_path.empty()) {
    write_file(config.out_path, gubqc::render_transcript(result.transcript));
  }
  const uint64_t hash = gubqc::transcript_hash(result.transcript);

  double fidelity = 0.0;
  if (result.quantum) {
    const gubqc::ReferenceResult ref = gubqc::reference_output(comp);
    fidelity = gubqc::fidelity_up_to_global_phase(*result.quantum, ref.state);
  }

  if (format == "machine") {
    std::cout << result_to_json(result, fidelity, hash).dump() << "\n";
  } else {
    if (result.classical) {
      std::cout << "classical output " << result.classical->to_string()
                << "\n";
    }
    if (result.quantum) {
      std::printf("state fingerprint %" PRIu64 "\n",
                  *result.transcript.quantum_fingerprint);
      std::printf("fidelity %.10f\n", fidelity);
    }
    std::printf("transcript hash %" PRIu64 "\n", hash);
  }
  return kExitOk;
}

int do_verify(const gubqc::RunConfig& config, const std::string& suite,
              const std::string& format) {
  bool pass = false;
  json machine;
  std::string text;

  if (suite == "correctness") {
    const gubqc::Computation comp = gubqc::materialize(config);
    const auto rep = gubqc::verify_correctness(comp, config.subgroup,
                                               config.key_samples);
    pass = rep.pass;
    text = gubqc::to_text(rep);
    machine = {{"suite", "correctness"},
               {"pass", rep.pass},
               {"keys", rep.keys_tested},
               {"branches", rep.branches_checked},
               {"sampled_fallback", rep.sampled_fallback},
               {"worst_fidelity", rep.worst_fidelity},
               {"worst_total_variation", rep.worst_total_variation},
               {"tolerance", rep.tolerance},
               {"detail", rep.detail}};
  } else if (suite == "blindness") {
    gubqc::Rng pick(config.layer_seed);
    const auto u1 =
        gubqc::DiagonalUnitary::sample_uniform(config.subgroup, config.n,
                                               pick);
    const auto u2 =
        gubqc::DiagonalUnitary::sample_uniform(config.subgroup, config.n,
                                               pick);
    gubqc::BlindnessReport rep;
    if (config.subgroup.cyclic_order != 0) {
      rep = gubqc::verify_blindness_exhaustive(config.subgroup, config.n,
                                               {u1, u2});
    } else {
      gubqc::Rng rng(config.seed_alice);
      rep = gubqc::verify_blindness_sampled(config.subgroup, config.n,
                                            {u1, u2},
                                            config.blindness_samples, rng);
    }
    pass = rep.pass;
    text = gubqc::to_text(rep);
    machine = {{"suite", "blindness"},
               {"pass", rep.pass},
               {"mode", rep.mode == gubqc::BlindnessMode::kExhaustive
                            ? "exhaustive"
                            : "sampled"},
               {"state_trace_distance", rep.state_trace_distance},
               {"instruction_distribution_deviation",
                rep.instruction_distribution_deviation},
               {"sample_count", rep.sample_count},
               {"verdict", rep.verdict}};
  } else if (suite == "teleport") {
    gubqc::Rng rng(config.seed_alice);
    const auto rep =
        gubqc::teleportation_identity_check(config.teleport_trials, rng);
    pass = rep.pass;
    text = gubqc::to_text(rep);
    machine = {{"suite", "teleport"},
               {"pass", rep.pass},
               {"trials", rep.trials},
               {"worst_fidelity", rep.worst_fidelity}};
  } else if (suite == "closure") {
    const auto rep = gubqc::verify_closure(config.subgroup, config.n);
    pass = rep.ok();
    std::ostringstream t;
    t << "closure elements=" << rep.element_count
      << " identity=" << (rep.contains_identity ? "yes" : "no")
      << " products=" << (rep.product_closed ? "closed" : "open")
      << " inverses=" << (rep.inverse_closed ? "closed" : "open")
      << " x-conjugation="
      << (rep.x_conjugation_closed ? "closed" : "open")
      << " verdict=" << (pass ? "pass" : "fail");
    if (!rep.counterexample.empty()) {
      t << " counterexample=\"" << rep.counterexample << "\"";
    }
    text = t.str();
    machine = {{"suite", "closure"},
               {"pass", pass},
               {"elements", rep.element_count},
               {"counterexample", rep.counterexample}};
  } else {
    throw gubqc::ConfigError(
        "unknown suite '" + suite +
        "' (expected correctness, blindness, teleport, or closure)");
  }

  if (format == "machine") {
    std::cout << machine.dump() << "\n";
  } else {
    std::cout << text << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

json bounds_to_json(const gubqc::GammaBounds& b) {
  return {{"setting", gubqc::setting_name(b.setting)},
          {"N", b.N},
          {"lower", b.lower.get_str()},
          {"upper", b.upper.get_str()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator and verifier for blind delegated computation with "
      "diagonal-unitary layers"};
  app.require_subcommand(1);
  app.footer(config_key_footer());

  CommonFlags flags;

  const auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config", flags.config_path, "run configuration file")
          ->required();
    }
    cmd->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"text", "machine"}));
    cmd->add_option("--out", flags.out_path, "transcript output path");
    cmd->add_option("--seed-alice", flags.seed_alice, "override Alice's seed")
        ->each([&](const std::string&) { flags.seed_alice_set = true; });
    cmd->add_option("--seed-bob", flags.seed_bob, "override Bob's seed")
        ->each([&](const std::string&) { flags.seed_bob_set = true; });
  };

  auto* run_cmd = app.add_subcommand("run", "execute one delegated session");
  add_common(run_cmd, true);

  auto* verify_cmd =
      app.add_subcommand("verify", "run a verification suite");
  add_common(verify_cmd, true);
  std::string suite;
  verify_cmd->add_option("--suite", suite, "verification suite")
      ->check(CLI::IsMember({"correctness", "blindness", "teleport",
                             "closure"}))
      ->required();

  auto* bounds_cmd =
      app.add_subcommand("bounds", "communication bound tables");
  std::string setting_name = "separable1q";
  int bounds_k = 1;
  int bounds_n = 0;
  int bounds_m = 0;
  std::string budget;
  bool comparison = false;
  std::vector<int64_t> n_values;
  bounds_cmd->add_option("--setting", setting_name, "bound setting")
      ->check(CLI::IsMember({"separable1q", "separablekq", "commuting",
                             "memory"}));
  bounds_cmd->add_option("--k", bounds_k, "block / memory width k");
  bounds_cmd->add_option("--n", bounds_n, "register width n");
  bounds_cmd->add_option("--m", bounds_m, "layer count m (commuting budget)");
  bounds_cmd->add_option("--f", budget, "commuting gate budget f(N)");
  bounds_cmd->add_flag("--comparison", comparison,
                       "emit the protocol comparison table (needs --n)");
  bounds_cmd->add_option("N", n_values, "transmitted qubit counts")
      ->required();
  bounds_cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* serve_cmd =
      app.add_subcommand("serve", "serve Bob sessions over TCP");
  std::string host = "127.0.0.1";
  uint16_t port = 0;
  bool once = false;
  bool threaded = false;
  serve_cmd->add_option("--host", host, "listen address");
  serve_cmd->add_option("--port", port, "listen port (0 = ephemeral)");
  serve_cmd->add_option("--seed-bob", flags.seed_bob, "Bob's per-session seed")
      ->each([&](const std::string&) { flags.seed_bob_set = true; });
  serve_cmd->add_flag("--once", once, "serve a single connection and exit");
  serve_cmd->add_flag("--threaded", threaded,
                      "one thread per connection (isolated session state)");

  auto* connect_cmd = app.add_subcommand(
      "connect", "drive Alice's side against a remote Bob server");
  add_common(connect_cmd, true);
  connect_cmd->add_option("--host", host, "server address");
  connect_cmd->add_option("--port", port, "server port")->required();

  auto* replay_cmd = app.add_subcommand(
      "replay", "re-run a persisted transcript and compare bytes");
  std::string transcript_path;
  replay_cmd->add_option("transcript", transcript_path, "transcript file")
      ->required();
  replay_cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      gubqc::RunConfig config = load_config(flags.config_path);
      apply_overrides(config, flags);
      return do_run_like(config, config.transport, flags.format, false, "",
                         0);
    }

    if (verify_cmd->parsed()) {
      gubqc::RunConfig config = load_config(flags.config_path);
      apply_overrides(config, flags);
      return do_verify(config, suite, flags.format);
    }

    if (bounds_cmd->parsed()) {
      json rows = json::array();
      std::ostringstream text;
      for (int64_t n_qubits : n_values) {
        if (comparison) {
          if (bounds_n < 2) {
            throw gubqc::ConfigError("--comparison requires --n >= 2");
          }
          const auto table =
              gubqc::protocol_comparison(n_qubits, bounds_n);
          text << gubqc::to_text(table);
          json jt = {{"N", table.N},
                     {"n", table.n},
                     {"upper", table.upper.get_str()},
                     {"rows", json::array()}};
          for (const auto& row : table.rows) {
            json jr = {{"protocol", row.protocol},
                       {"expression", row.expression},
                       {"constant_unspecified", row.constant_unspecified},
                       {"note", row.note}};
            if (row.value) {
              jr["value"] = gubqc::rational_to_decimal(*row.value);
              jr["value_num"] = row.value->get_num().get_str();
              jr["value_den"] = row.value->get_den().get_str();
            }
            if (row.gap_vs_upper) {
              jr["gap_num"] = row.gap_vs_upper->get_num().get_str();
              jr["gap_den"] = row.gap_vs_upper->get_den().get_str();
            }
            jt["rows"].push_back(jr);
          }
          rows.push_back(jt);
          continue;
        }
        gubqc::Setting setting;
        if (setting_name == "separable1q") {
          setting = gubqc::SeparableSingleQubit{};
        } else if (setting_name == "separablekq") {
          setting = gubqc::SeparableKQubit{bounds_k};
        } else if (setting_name == "commuting") {
          gubqc::Commuting c;
          c.n = bounds_n;
          c.m = bounds_m;
          if (!budget.empty()) c.f_n = mpz_class(budget);
          setting = c;
        } else {
          setting = gubqc::MemoryK{bounds_k, bounds_n};
        }
        const auto b = gubqc::gamma_bounds(setting, n_qubits);
        text << gubqc::to_text(b) << "\n";
        rows.push_back(bounds_to_json(b));
      }
      if (flags.format == "machine") {
        std::cout << rows.dump() << "\n";
      } else {
        std::cout << text.str();
      }
      return kExitOk;
    }

    if (serve_cmd->parsed()) {
      gubqc::TcpListener listener(host, port);
      std::printf("listening on %s:%u\n", host.c_str(), listener.port());
      std::fflush(stdout);
      do {
        auto transport = listener.accept_one();
        if (threaded) {
          std::thread([t = std::move(transport),
                       seed = flags.seed_bob]() mutable {
            try {
              gubqc::run_bob_over(*t, seed);
            } catch (const std::exception& e) {
              std::fprintf(stderr, "session error: %s\n", e.what());
            }
          }).detach();
        } else {
          try {
            gubqc::run_bob_over(*transport, flags.seed_bob);
          } catch (const std::exception& e) {
            std::fprintf(stderr, "session error: %s\n", e.what());
            if (once) return kExitCheckFailed;
          }
        }
      } while (!once);
      return kExitOk;
    }

    if (connect_cmd->parsed()) {
      gubqc::RunConfig config = load_config(flags.config_path);
      apply_overrides(config, flags);
      return do_run_like(config, config.transport, flags.format, true, host,
                         port);
    }

    if (replay_cmd->parsed()) {
      const auto recorded =
          gubqc::parse_transcript(read_file(transcript_path));
      gubqc::validate_grammar(recorded);
      if (recorded.config_text.empty()) {
        throw gubqc::ConfigError(
            "transcript carries no embedded config; cannot replay");
      }
      gubqc::RunConfig config = gubqc::parse_config(recorded.config_text);
      config.seed_alice = recorded.alice_seed;
      config.seed_bob = recorded.bob_seed;
      gubqc::SessionOptions opts;
      opts.config_text = recorded.config_text;
      const auto result = gubqc::run_session(
          gubqc::materialize(config), config.subgroup, config.seed_alice,
          config.seed_bob, gubqc::TransportSpec{}, opts);
      const bool identical = result.transcript == recorded;
      const uint64_t hash = gubqc::transcript_hash(result.transcript);
      if (flags.format == "machine") {
        json j = {{"identical", identical},
                  {"hash", hash},
                  {"recorded_hash", gubqc::transcript_hash(recorded)}};
        std::cout << j.dump() << "\n";
      } else {
        std::printf("replay %s, transcript hash %" PRIu64 "\n",
                    identical ? "reproduced byte-for-byte" : "DIVERGED",
                    hash);
      }
      return identical ? kExitOk : kExitCheckFailed;
    }
  } catch (const gubqc::WireError& e) {
    std::fprintf(stderr, "wire error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}
