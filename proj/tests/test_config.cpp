#include <doctest.h>

#include <random>

#include "gnoc/config.hpp"

using namespace gnoc;

TEST_CASE("table defaults load from a minimal file") {
  LoadedConfig lc = parse_config_text("[network]\nmesh_rows = 8\nmesh_cols = 8\n");
  const NetworkConfig& c = lc.network;
  CHECK(c.mesh_rows == 8);
  CHECK(c.mesh_cols == 8);
  CHECK(c.vcs_per_port == 2);
  CHECK(c.pipeline_depth == 4);
  CHECK(c.link_latency == 1);
  CHECK(c.buffer_depth == 4);
  CHECK(c.flit_size == 128);
  CHECK(c.gather_payload_bits == 32);
  CHECK(c.unicast_len == 2);
  CHECK(c.t_mac == 5);
  CHECK(c.gather_len == 3);   // n=1 default
  CHECK(c.delta == 28);       // (M-1)*kappa
}

TEST_CASE("payload wider than a flit is rejected") {
  CHECK_THROWS_WITH_AS(
      parse_config_text("[network]\nflit_size = 16\ngather_payload_size = 32\n"),
      "gather_payload_size exceeds flit size", ConfigError);
}

TEST_CASE("gather packet length defaults track the PE count") {
  // 3/5/9/17 flits per packet for 1/2/4/8 PEs per router.
  int expect[9] = {};
  expect[1] = 3;
  expect[2] = 5;
  expect[4] = 9;
  expect[8] = 17;
  for (int n : {1, 2, 4, 8}) {
    LoadedConfig lc =
        parse_config_text("[network]\npes_per_router = " + std::to_string(n) + "\n");
    CHECK(lc.network.gather_len == expect[n]);
  }
}

TEST_CASE("payloads_per_gather_packet counts body slots only") {
  NetworkConfig c;
  c.gather_len = 3;
  c.apply_defaults();
  CHECK(payloads_per_gather_packet(c) == 8);  // (3-1)*floor(128/32)

  c.gather_len = 17;
  CHECK(payloads_per_gather_packet(c) == 64);

  NetworkConfig tiny;
  tiny.flit_size = 32;
  tiny.gather_payload_bits = 32;
  tiny.gather_len = 2;
  tiny.apply_defaults();
  CHECK(payloads_per_gather_packet(tiny) == 1);
}

TEST_CASE("default delta spans the row") {
  NetworkConfig c;
  c.apply_defaults();
  CHECK(c.default_delta() == 28);  // 8x8, kappa=4

  NetworkConfig one;
  one.mesh_rows = 1;
  one.mesh_cols = 1;
  one.apply_defaults();
  CHECK(one.default_delta() == 0);

  NetworkConfig big;
  big.mesh_rows = 16;
  big.mesh_cols = 16;
  big.apply_defaults();
  CHECK(big.default_delta() == 60);
}

TEST_CASE("serialize then reload is the identity") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    NetworkConfig c;
    c.mesh_rows = 1 + int(rng() % 16);
    c.mesh_cols = 1 + int(rng() % 16);
    c.vcs_per_port = 1 + int(rng() % 4);
    c.buffer_depth = 1 + int(rng() % 8);
    c.pipeline_depth = 1 + int(rng() % 6);
    c.link_latency = 1 + int(rng() % 3);
    int ns[4] = {1, 2, 4, 8};
    c.pes_per_router = ns[rng() % 4];
    c.unicast_len = 2 + int(rng() % 3);
    c.gather_len = 2 + int(rng() % 17);
    c.delta = int(rng() % 100);
    c.t_mac = 1 + int(rng() % 9);
    c.streaming_mode = StreamingMode(rng() % 3);
    c.result_mode = ResultMode(rng() % 2);
    c.apply_defaults();
    c.validate();

    LoadedConfig re = parse_config_text(c.serialize());
    CHECK(re.network == c);
  }
}

TEST_CASE("table packet sizes fill one row on 8x8 and half a row on 16x16") {
  for (int n : {1, 2, 4, 8}) {
    NetworkConfig c;
    c.pes_per_router = n;
    c.apply_defaults();
    int eta = payloads_per_gather_packet(c);
    CHECK(eta >= 8 * n);   // one packet per row suffices on 8x8
    CHECK(eta < 16 * n);   // two packets needed on 16x16
  }
}

TEST_CASE("layer sections parse and validate") {
  LoadedConfig lc = parse_config_text(
      "[network]\nmesh_rows = 4\nmesh_cols = 4\n"
      "[layer]\nname = conv1\ninput_h = 224\nchannels = 3\nkernel_r = 11\n"
      "num_inputs = 55\nnum_filters = 64\n"
      "[layer]\nname = conv2\ninput_h = 27\nchannels = 64\nkernel_r = 5\n"
      "num_inputs = 27\nnum_filters = 192\n");
  REQUIRE(lc.layers.size() == 2);
  CHECK(lc.layers[0].name == "conv1");
  CHECK(lc.layers[0].macs_per_pe() == 3 * 11 * 11);
  CHECK(lc.layers[1].kernel_r == 5);
}

TEST_CASE("parse errors carry line information") {
  try {
    parse_config_text("[network]\nmesh_rows == 3\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
  }
}

TEST_CASE("sweep points are validated configurations") {
  SweepSpec sweep;
  sweep.variable = SweepVariable::PesPerRouter;
  sweep.values = {1, 2, 4, 8};
  sweep.base.apply_defaults();
  auto points = sweep.materialize();
  REQUIRE(points.size() == 4);
  CHECK(points[3].gather_len == 17);

  SweepSpec bad;
  bad.base.apply_defaults();
  CHECK_THROWS_AS(bad.materialize(), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  NetworkConfig a;
  a.apply_defaults();
  NetworkConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  b.delta = a.delta + 1;
  CHECK(config_hash(a) != config_hash(b));
}
