#include "gubqc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "gubqc/errors.hpp"

namespace gubqc {
namespace {

constexpr double kPi = 3.14159265358979323846;

uint64_t parse_u64_value(const std::string& key, const std::string& text) {
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("config key '" + key +
                      "' expects an unsigned integer, got '" + text + "'");
  }
  return value;
}

int parse_int_value(const std::string& key, const std::string& text, int min,
                    int max) {
  const uint64_t v = parse_u64_value(key, text);
  if (v < static_cast<uint64_t>(min) || v > static_cast<uint64_t>(max)) {
    throw ConfigError("config key '" + key + "' must be in " +
                      std::to_string(min) + ".." + std::to_string(max) +
                      ", got " + text);
  }
  return static_cast<int>(v);
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace

const std::vector<ConfigKeyDoc>& config_key_docs() {
  static const std::vector<ConfigKeyDoc> docs = {
      {"schema_version", "config schema version; must be 1"},
      {"n", "qubits per register (1..12)"},
      {"m", "number of layers (>= 1)"},
      {"subgroup", "subgroup kind: discrete | continuous"},
      {"block_size", "block width k; n must be a multiple of k"},
      {"cyclic_order", "lattice order q >= 2 (discrete subgroups only)"},
      {"mode", "output mode: classical | quantum"},
      {"layers", "layer source: random | explicit"},
      {"layer_seed", "seed for random layer sampling (layers random)"},
      {"layer",
       "explicit layer: 'layer <i> <angles...>' with (n/k)*2^k tokens, each "
       "0, <a>pi, or <a>/<b>pi"},
      {"seed_alice", "Alice's RNG seed"},
      {"seed_bob", "Bob's RNG seed"},
      {"transport", "inprocess | socket <host>:<port>"},
      {"out", "transcript output path"},
      {"key_samples", "secret keys per correctness run (default 100)"},
      {"blindness_samples",
       "samples for the sampled blindness suite (default 100000)"},
      {"teleport_trials", "trials for the teleport suite (default 50)"},
  };
  return docs;
}

double parse_angle_token(const std::string& token) {
  const auto fail = [&]() -> double {
    throw ConfigError("bad angle token '" + token +
                      "': expected 0, <a>pi, or <a>/<b>pi");
  };
  if (token == "0") return 0.0;
  if (token.size() < 3 || token.substr(token.size() - 2) != "pi") {
    return fail();
  }
  const std::string body = token.substr(0, token.size() - 2);
  uint64_t num = 0;
  uint64_t den = 1;
  const size_t slash = body.find('/');
  const auto parse_part = [&](const std::string& part, uint64_t& out) {
    const auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size() ||
        part.empty()) {
      fail();
    }
  };
  if (slash == std::string::npos) {
    parse_part(body, num);
  } else {
    parse_part(body.substr(0, slash), num);
    parse_part(body.substr(slash + 1), den);
    if (den == 0) fail();
  }
  double angle = std::fmod(kPi * static_cast<double>(num) /
                               static_cast<double>(den),
                           2.0 * kPi);
  if (angle < 0.0) angle += 2.0 * kPi;
  return angle;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::set<int> layer_indices;
  bool saw_cyclic_order = false;
  std::string subgroup_kind;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto words = split_words(line);
    if (words.empty() || words.front().front() == '#') continue;
    const std::string& key = words.front();
    const auto where = [&] {
      return " (config line " + std::to_string(line_no) + ")";
    };
    if (key != "layer" && !seen.insert(key).second) {
      throw ConfigError("duplicate config key '" + key + "'" + where());
    }
    const auto single_value = [&]() -> const std::string& {
      if (words.size() != 2) {
        throw ConfigError("config key '" + key +
                          "' expects exactly one value" + where());
      }
      return words[1];
    };

    if (key == "schema_version") {
      config.schema_version = parse_int_value(key, single_value(), 1, 1);
    } else if (key == "n") {
      config.n = parse_int_value(key, single_value(), 1, 12);
    } else if (key == "m") {
      config.m = parse_int_value(key, single_value(), 1, 12);
    } else if (key == "subgroup") {
      subgroup_kind = single_value();
      if (subgroup_kind != "discrete" && subgroup_kind != "continuous") {
        throw ConfigError(
            "config key 'subgroup' must be discrete or continuous" + where());
      }
    } else if (key == "block_size") {
      config.subgroup.block_size = parse_int_value(key, single_value(), 1, 12);
    } else if (key == "cyclic_order") {
      saw_cyclic_order = true;
      config.subgroup.cyclic_order = static_cast<uint32_t>(
          parse_int_value(key, single_value(), 2, 1 << 20));
    } else if (key == "mode") {
      const std::string& v = single_value();
      if (v == "classical") {
        config.mode = OutputMode::kClassical;
      } else if (v == "quantum") {
        config.mode = OutputMode::kQuantum;
      } else {
        throw ConfigError("config key 'mode' must be classical or quantum" +
                          where());
      }
    } else if (key == "layers") {
      const std::string& v = single_value();
      if (v == "random") {
        config.layers_random = true;
      } else if (v == "explicit") {
        config.layers_random = false;
      } else {
        throw ConfigError("config key 'layers' must be random or explicit" +
                          where());
      }
    } else if (key == "layer_seed") {
      config.layer_seed = parse_u64_value(key, single_value());
    } else if (key == "layer") {
      if (words.size() < 3) {
        throw ConfigError("config key 'layer' expects an index and angles" +
                          where());
      }
      LayerDef def;
      def.index = parse_int_value("layer index", words[1], 1, 12);
      if (!layer_indices.insert(def.index).second) {
        throw ConfigError("duplicate layer " + std::to_string(def.index) +
                          where());
      }
      def.tokens.assign(words.begin() + 2, words.end());
      for (const std::string& tok : def.tokens) parse_angle_token(tok);
      config.explicit_layers.push_back(std::move(def));
    } else if (key == "seed_alice") {
      config.seed_alice = parse_u64_value(key, single_value());
    } else if (key == "seed_bob") {
      config.seed_bob = parse_u64_value(key, single_value());
    } else if (key == "transport") {
      if (words.size() == 2 && words[1] == "inprocess") {
        config.transport = TransportSpec{};
      } else if (words.size() == 3 && words[1] == "socket") {
        const std::string& addr = words[2];
        const size_t colon = addr.rfind(':');
        if (colon == std::string::npos || colon == 0 ||
            colon + 1 == addr.size()) {
          throw ConfigError(
              "config key 'transport' socket form needs <host>:<port>" +
              where());
        }
        config.transport.kind = TransportKind::kSocket;
        config.transport.host = addr.substr(0, colon);
        config.transport.port = static_cast<uint16_t>(parse_int_value(
            "transport port", addr.substr(colon + 1), 0, 65535));
      } else {
        throw ConfigError(
            "config key 'transport' must be inprocess or socket "
            "<host>:<port>" +
            where());
      }
    } else if (key == "out") {
      config.out_path = single_value();
    } else if (key == "key_samples") {
      config.key_samples = parse_int_value(key, single_value(), 1, 1000000);
    } else if (key == "blindness_samples") {
      config.blindness_samples =
          static_cast<int64_t>(parse_u64_value(key, single_value()));
    } else if (key == "teleport_trials") {
      config.teleport_trials =
          parse_int_value(key, single_value(), 1, 1000000);
    } else {
      throw ConfigError("unknown config key '" + key + "'" + where());
    }
  }

  for (const char* required : {"schema_version", "n", "m", "subgroup",
                               "block_size", "mode"}) {
    if (!seen.count(required)) {
      throw ConfigError(std::string("missing config key '") + required + "'");
    }
  }
  if (subgroup_kind == "discrete" && !saw_cyclic_order) {
    throw ConfigError(
        "config key 'cyclic_order' is required for a discrete subgroup");
  }
  if (subgroup_kind == "continuous" && saw_cyclic_order) {
    throw ConfigError(
        "config key 'cyclic_order' conflicts with subgroup continuous");
  }
  if (config.n % config.subgroup.block_size != 0) {
    throw ConfigError(
        "n must be a multiple of k (k=" +
        std::to_string(config.subgroup.block_size) +
        ", n=" + std::to_string(config.n) + ")");
  }
  if (config.layers_random) {
    if (!config.explicit_layers.empty()) {
      throw ConfigError("'layer' lines conflict with layers random");
    }
  } else {
    if (seen.count("layer_seed")) {
      throw ConfigError("'layer_seed' conflicts with layers explicit");
    }
    if (static_cast<int>(config.explicit_layers.size()) != config.m) {
      throw ConfigError("layers explicit needs one 'layer' line per layer "
                        "1.." +
                        std::to_string(config.m));
    }
    for (int i = 1; i <= config.m; ++i) {
      if (!layer_indices.count(i)) {
        throw ConfigError("missing 'layer " + std::to_string(i) + "' line");
      }
    }
    const size_t expected =
        static_cast<size_t>(config.n / config.subgroup.block_size)
        << config.subgroup.block_size;
    for (const LayerDef& def : config.explicit_layers) {
      if (def.tokens.size() != expected) {
        throw ConfigError("layer " + std::to_string(def.index) + " needs " +
                          std::to_string(expected) + " angle tokens, got " +
                          std::to_string(def.tokens.size()));
      }
    }
    std::sort(config.explicit_layers.begin(), config.explicit_layers.end(),
              [](const LayerDef& a, const LayerDef& b) {
                return a.index < b.index;
              });
  }
  return config;
}

std::string canonical_text(const RunConfig& config) {
  std::ostringstream out;
  out << "schema_version " << config.schema_version << "\n";
  out << "n " << config.n << "\n";
  out << "m " << config.m << "\n";
  out << "subgroup "
      << (config.subgroup.cyclic_order == 0 ? "continuous" : "discrete")
      << "\n";
  out << "block_size " << config.subgroup.block_size << "\n";
  if (config.subgroup.cyclic_order != 0) {
    out << "cyclic_order " << config.subgroup.cyclic_order << "\n";
  }
  out << "mode " << output_mode_name(config.mode) << "\n";
  out << "layers " << (config.layers_random ? "random" : "explicit") << "\n";
  if (config.layers_random) {
    out << "layer_seed " << config.layer_seed << "\n";
  } else {
    for (const LayerDef& def : config.explicit_layers) {
      out << "layer " << def.index;
      for (const std::string& tok : def.tokens) out << " " << tok;
      out << "\n";
    }
  }
  out << "seed_alice " << config.seed_alice << "\n";
  out << "seed_bob " << config.seed_bob << "\n";
  if (config.transport.kind == TransportKind::kInProcess) {
    out << "transport inprocess\n";
  } else {
    out << "transport socket " << config.transport.host << ":"
        << config.transport.port << "\n";
  }
  if (!config.out_path.empty()) out << "out " << config.out_path << "\n";
  out << "key_samples " << config.key_samples << "\n";
  out << "blindness_samples " << config.blindness_samples << "\n";
  out << "teleport_trials " << config.teleport_trials << "\n";
  return out.str();
}

Computation materialize(const RunConfig& config) {
  Computation comp;
  comp.n = config.n;
  comp.m = config.m;
  comp.output_mode = config.mode;
  if (config.layers_random) {
    Rng rng(config.layer_seed);
    for (int i = 0; i < config.m; ++i) {
      comp.layers.push_back(
          DiagonalUnitary::sample_uniform(config.subgroup, config.n, rng));
    }
  } else {
    for (const LayerDef& def : config.explicit_layers) {
      std::vector<double> angles;
      angles.reserve(def.tokens.size());
      for (const std::string& tok : def.tokens) {
        angles.push_back(parse_angle_token(tok));
      }
      comp.layers.push_back(DiagonalUnitary::from_flat_angles(
          config.subgroup, config.n, angles));
    }
  }
  return comp;
}

std::string resolve_config_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (const char* dir = std::getenv("GUBQC_CONFIG_DIR")) {
    const fs::path joined = fs::path(dir) / path;
    if (fs::exists(joined)) return joined.string();
  }
  throw ConfigError("config file not found: " + path);
}

}  // namespace gubqc
