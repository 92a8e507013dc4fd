#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gubqc/protocol.hpp"
#include "gubqc/session.hpp"

namespace gubqc {

// One explicit layer: (n/k)*2^k angle tokens in flat block order.
struct LayerDef {
  int index = 0;
  std::vector<std::string> tokens;

  bool operator==(const LayerDef&) const = default;
};

// Strict key-value run configuration. Unknown or duplicate keys are
// rejected; canonical_text() and parse_config() round-trip exactly.
struct RunConfig {
  int schema_version = 1;
  int n = 1;
  int m = 1;
  SubgroupSpec subgroup;
  OutputMode mode = OutputMode::kClassical;
  bool layers_random = true;
  uint64_t layer_seed = 0;
  std::vector<LayerDef> explicit_layers;
  uint64_t seed_alice = 0;
  uint64_t seed_bob = 0;
  TransportSpec transport;
  std::string out_path;
  int key_samples = 100;
  int64_t blindness_samples = 100000;
  int teleport_trials = 50;

  bool operator==(const RunConfig&) const = default;
};

// Keys understood by parse_config, each with a one-line description
// (surfaced by the CLI help text).
struct ConfigKeyDoc {
  const char* key;
  const char* doc;
};
const std::vector<ConfigKeyDoc>& config_key_docs();

RunConfig parse_config(const std::string& text);

std::string canonical_text(const RunConfig& config);

// Angle token grammar: "0", "<a>pi", or "<a>/<b>pi" (rational multiples of
// pi, e.g. "3/4pi").
double parse_angle_token(const std::string& token);

// Builds the m layers (sampling with layer_seed when layers_random).
Computation materialize(const RunConfig& config);

// Resolves a config path against the current directory first, then the
// directory named by the GUBQC_CONFIG_DIR environment variable.
std::string resolve_config_path(const std::string& path);

}  // namespace gubqc
