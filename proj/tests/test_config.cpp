#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "gubqc/config.hpp"
#include "gubqc/errors.hpp"

using namespace gubqc;

namespace {

const char* kSmallConfig =
    "schema_version 1\n"
    "n 2\n"
    "m 2\n"
    "subgroup discrete\n"
    "block_size 1\n"
    "cyclic_order 8\n"
    "mode quantum\n"
    "layers explicit\n"
    "layer 1 0 1/4pi 0 3/2pi\n"
    "layer 2 0 0 0 1pi\n"
    "seed_alice 7\n"
    "seed_bob 9\n";

}  // namespace

TEST_CASE("configs round-trip through their canonical text") {
  auto config = parse_config(kSmallConfig);
  CHECK(config.n == 2);
  CHECK(config.m == 2);
  CHECK(config.subgroup == SubgroupSpec{1, 8});
  CHECK(config.mode == OutputMode::kQuantum);
  CHECK_FALSE(config.layers_random);
  REQUIRE(config.explicit_layers.size() == 2);
  CHECK(config.explicit_layers[0].tokens[1] == "1/4pi");

  auto text = canonical_text(config);
  auto reparsed = parse_config(text);
  CHECK(reparsed == config);
  CHECK(canonical_text(reparsed) == text);
}

TEST_CASE("comments, blank lines, and random layers parse") {
  auto config = parse_config(
      "# delegated run\n"
      "schema_version 1\n"
      "\n"
      "n 1\n"
      "m 3\n"
      "subgroup continuous\n"
      "block_size 1\n"
      "mode classical\n"
      "layers random\n"
      "layer_seed 42\n");
  CHECK(config.subgroup.cyclic_order == 0);
  CHECK(config.layers_random);
  CHECK(config.layer_seed == 42);
  auto comp = materialize(config);
  CHECK(comp.m == 3);
  CHECK(comp.layers.size() == 3);
}

TEST_CASE("angle tokens cover zero and rational multiples of pi") {
  CHECK(parse_angle_token("0") == 0.0);
  CHECK(parse_angle_token("1pi") ==
        doctest::Approx(3.14159265).epsilon(1e-8));
  CHECK(parse_angle_token("3/4pi") ==
        doctest::Approx(3.0 * 3.14159265 / 4).epsilon(1e-8));
  CHECK(parse_angle_token("7/4pi") ==
        doctest::Approx(7.0 * 3.14159265 / 4).epsilon(1e-8));
  // Angles wrap into [0, 2pi).
  CHECK(parse_angle_token("2pi") == 0.0);
  CHECK_THROWS_AS(parse_angle_token("pi"), ConfigError);
  CHECK_THROWS_AS(parse_angle_token("1.5pi"), ConfigError);
  CHECK_THROWS_AS(parse_angle_token("pi/4"), ConfigError);
  CHECK_THROWS_AS(parse_angle_token(""), ConfigError);
  CHECK_THROWS_AS(parse_angle_token("3/0pi"), ConfigError);
}

TEST_CASE("explicit layers materialize to the written lattice element") {
  auto comp = materialize(parse_config(kSmallConfig));
  REQUIRE(comp.layers.size() == 2);
  CHECK(comp.layers[0].lattice_indices() == std::vector<uint32_t>{0, 1, 0, 6});
  CHECK(comp.layers[1].lattice_indices() == std::vector<uint32_t>{0, 0, 0, 4});
  CHECK(comp.output_mode == OutputMode::kQuantum);
}

TEST_CASE("malformed configs are rejected with line diagnostics") {
  CHECK_THROWS_WITH_AS(
      parse_config("schema_version 1\nbogus_key 3\n"),
      "unknown config key 'bogus_key' (config line 2)", ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version 2\n"), ConfigError);
  // Duplicate key.
  CHECK_THROWS_AS(parse_config("schema_version 1\nn 1\nn 2\n"), ConfigError);
  // Missing required keys.
  CHECK_THROWS_AS(parse_config("schema_version 1\nn 1\n"), ConfigError);
}

TEST_CASE("cross-field validation catches inconsistent shapes") {
  // Block size must divide n.
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 3\nm 1\n"
                               "subgroup discrete\n"
                               "block_size 2\ncyclic_order 4\n"
                               "mode classical\n"),
                  ConfigError);
  // Discrete requires a cyclic order.
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 1\nm 1\n"
                               "subgroup discrete\n"
                               "block_size 1\n"
                               "mode classical\n"),
                  ConfigError);
  // Continuous forbids one.
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 1\nm 1\n"
                               "subgroup continuous\n"
                               "block_size 1\ncyclic_order 8\n"
                               "mode classical\n"),
                  ConfigError);
  // Explicit layers need every index once with the right token count.
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 1\nm 2\n"
                               "subgroup discrete\n"
                               "block_size 1\ncyclic_order 8\n"
                               "mode classical\n"
                               "layers explicit\n"
                               "layer 1 0 1/4pi\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 1\nm 1\n"
                               "subgroup discrete\n"
                               "block_size 1\ncyclic_order 8\n"
                               "mode classical\n"
                               "layers explicit\n"
                               "layer 1 0\n"),
                  ConfigError);
  // Random layers forbid layer lines.
  CHECK_THROWS_AS(parse_config("schema_version 1\n"
                               "n 1\nm 1\n"
                               "subgroup discrete\n"
                               "block_size 1\ncyclic_order 8\n"
                               "mode classical\n"
                               "layers random\n"
                               "layer 1 0 0\n"),
                  ConfigError);
  // Off-lattice explicit angle for the declared cyclic order.
  CHECK_THROWS_AS(materialize(parse_config("schema_version 1\n"
                                           "n 1\nm 1\n"
                                           "subgroup discrete\n"
                                           "block_size 1\ncyclic_order 2\n"
                                           "mode classical\n"
                                           "layers explicit\n"
                                           "layer 1 0 1/4pi\n")),
                  ConfigError);
}

TEST_CASE("every documented key parses and every parsed key is documented") {
  const auto& docs = config_key_docs();
  CHECK(docs.size() >= 17);
  bool found_layer = false;
  for (const auto& doc : docs) {
    if (std::string(doc.key) == "layer") found_layer = true;
    CHECK(doc.doc[0] != '\0');
  }
  CHECK(found_layer);
}

TEST_CASE("config paths resolve through GUBQC_CONFIG_DIR") {
  const std::string dir = "/tmp/gubqc_test_configs";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/probe.cfg");
    out << "schema_version 1\n";
  }
  ::setenv("GUBQC_CONFIG_DIR", dir.c_str(), 1);
  CHECK(resolve_config_path("probe.cfg") == dir + "/probe.cfg");
  CHECK_THROWS_AS(resolve_config_path("missing.cfg"), ConfigError);
  ::unsetenv("GUBQC_CONFIG_DIR");
}
