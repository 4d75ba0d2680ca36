#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "smartran/config.hpp"

using namespace smartran;

TEST_CASE("default profile matches the reference scenario") {
  ScenarioConfig c = ScenarioConfig::full();
  REQUIRE(c.num_rrs == 4);
  REQUIRE(c.area_radius_m == 500.0);
  REQUIRE(c.cell_radius_m == 100.0);
  REQUIRE(c.num_subcarriers == 32);
  REQUIRE(c.bandwidth_hz == 10e6);
  REQUIRE(c.max_power_dbm == 40.0);
  REQUIRE(c.noise_dbm_hz == -174.0);
  REQUIRE(c.l_max == 2);
  REQUIRE(c.user_counts == std::vector<int>{40, 80, 120, 160, 200});
  REQUIRE(c.bits.csi == 16);
  REQUIRE(c.bits.subcarrier == 4);
  REQUIRE(c.bits.power == 4);
  REQUIRE(c.gamma_rap == 0.5);
  c.validate();

  auto p = c.topology_params(40);
  REQUIRE(p.max_power_w == Catch::Approx(10.0));
  REQUIRE(p.subcarrier_bandwidth_hz == Catch::Approx(10e6 / 32));
  REQUIRE(p.noise_psd_w_hz == Catch::Approx(3.9810717055349695e-21));
}

TEST_CASE("fast profile shrinks the scenario but stays valid") {
  ScenarioConfig c = ScenarioConfig::fast();
  REQUIRE(c.num_subcarriers == 8);
  REQUIRE(c.user_counts == std::vector<int>{8, 24, 48});
  REQUIRE(c.train_slots < ScenarioConfig::full().train_slots);
  REQUIRE(c.hidden_dst == std::vector<int>{16, 16});
  c.validate();
}

TEST_CASE("empty overlay text changes nothing") {
  ScenarioConfig c = ScenarioConfig::full();
  parse_config_text(c, "");
  parse_config_text(c, "\n  \n# only a comment\n; and another\n");
  REQUIRE(c.num_rrs == 4);
  REQUIRE(c.train_slots == 20000);
}

TEST_CASE("overlay values replace profile values") {
  ScenarioConfig c = ScenarioConfig::fast();
  parse_config_text(c,
                    "[scenario]\n"
                    "num_rrs = 2\n"
                    "user_counts = 4, 12\n"
                    "[train]\n"
                    "train_slots = 77\n"
                    "hidden_cnt = 8,8\n"
                    "seed = 99\n"
                    "[sdn]\n"
                    "learner = dqn\n"
                    "epsilon = 0.25\n");
  REQUIRE(c.num_rrs == 2);
  REQUIRE(c.user_counts == std::vector<int>{4, 12});
  REQUIRE(c.train_slots == 77);
  REQUIRE(c.hidden_cnt == std::vector<int>{8, 8});
  REQUIRE(c.seed == 99);
  REQUIRE(c.sdn_learner == "dqn");
  REQUIRE(c.sdn_epsilon == 0.25);
  // untouched keys keep the profile value
  REQUIRE(c.num_subcarriers == 8);
  c.validate();
}

TEST_CASE("inline comments and whitespace are tolerated") {
  ScenarioConfig c;
  parse_config_text(c,
                    "  [scenario]  # geometry\n"
                    "  num_rrs   =  3   ; three sites\n");
  REQUIRE(c.num_rrs == 3);
}

TEST_CASE("misspelled keys are rejected by name") {
  ScenarioConfig c;
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\npowr_dbm = 40\n"),
                      Catch::Matchers::ContainsSubstring("unknown key 'powr_dbm'") &&
                          Catch::Matchers::ContainsSubstring("[scenario]"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[train]\nlearning_rate = 0.1\n"),
                      Catch::Matchers::ContainsSubstring("unknown key 'learning_rate'"));
}

TEST_CASE("structural errors are rejected") {
  ScenarioConfig c;
  REQUIRE_THROWS_WITH(parse_config_text(c, "[nonsense]\n"),
                      Catch::Matchers::ContainsSubstring("unknown section"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "num_rrs = 4\n"),
                      Catch::Matchers::ContainsSubstring("before any section"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario\nnum_rrs = 4\n"),
                      Catch::Matchers::ContainsSubstring("malformed section header"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\nnum_rrs\n"),
                      Catch::Matchers::ContainsSubstring("expected key = value"));
}

TEST_CASE("typed values are checked") {
  ScenarioConfig c;
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\nnum_rrs = four\n"),
                      Catch::Matchers::ContainsSubstring("bad integer 'four'"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\narea_radius_m = wide\n"),
                      Catch::Matchers::ContainsSubstring("bad number 'wide'"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\nnum_rrs = 4x\n"),
                      Catch::Matchers::ContainsSubstring("bad integer '4x'"));
  REQUIRE_THROWS_WITH(parse_config_text(c, "[scenario]\nuser_counts = 4,,8\n"),
                      Catch::Matchers::ContainsSubstring("empty list entry"));
}

TEST_CASE("validate collects every problem into one message") {
  ScenarioConfig c;
  c.num_rrs = 0;
  c.lr = -1;
  c.sdn_learner = "oracle";
  c.user_counts = {20, 10};
  try {
    c.validate();
    FAIL("expected validate to throw");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    REQUIRE(msg.find("num_rrs must be >= 1") != std::string::npos);
    REQUIRE(msg.find("lr must be positive") != std::string::npos);
    REQUIRE(msg.find("sdn_learner must be sac or dqn") != std::string::npos);
    REQUIRE(msg.find("user_counts must be ascending") != std::string::npos);
  }
}

TEST_CASE("buffer capacity must hold a batch") {
  ScenarioConfig c;
  c.batch = 128;
  c.buffer_capacity = 64;
  REQUIRE_THROWS_WITH(c.validate(),
                      Catch::Matchers::ContainsSubstring("buffer_capacity must hold"));
}

TEST_CASE("config files load through the same parser") {
  std::string path = "/tmp/smartran_test_config.ini";
  {
    std::ofstream out(path);
    out << "[scenario]\nnum_rrs = 5\n";
  }
  ScenarioConfig c;
  load_config_file(c, path);
  REQUIRE(c.num_rrs == 5);
  std::remove(path.c_str());

  ScenarioConfig d;
  REQUIRE_THROWS_WITH(load_config_file(d, "/tmp/smartran_no_such_file.ini"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}
