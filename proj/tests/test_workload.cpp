#include <doctest.h>

#include <map>
#include <random>

#include "gnoc/workload.hpp"

using namespace gnoc;

namespace {

NetworkConfig mesh(int rows, int cols, int n) {
  NetworkConfig c;
  c.mesh_rows = rows;
  c.mesh_cols = cols;
  c.pes_per_router = n;
  c.apply_defaults();
  return c;
}

LayerShape layer(int p, int q, int c = 1, int r = 1) {
  LayerShape l;
  l.name = "t";
  l.num_inputs = p;
  l.num_filters = q;
  l.channels = c;
  l.kernel_r = r;
  return l;
}

// Independent tiling enumeration: walk every (input, filter) pair the way
// the OS mapping assigns them and count payloads per round.
std::map<uint32_t, long long> brute_force_round_payloads(const NetworkConfig& cfg,
                                                         const LayerShape& l) {
  std::map<uint32_t, long long> per_round;
  long long slots = (long long)cfg.mesh_cols * cfg.pes_per_router;
  int col_tiles = int((l.num_filters + slots - 1) / slots);
  for (int i = 0; i < l.num_inputs; ++i) {
    for (int k = 0; k < l.num_filters; ++k) {
      int it = i / cfg.mesh_rows;
      int jt = int(k / slots);
      per_round[uint32_t(it * col_tiles + jt)] += 1;
    }
  }
  return per_round;
}

}  // namespace

TEST_CASE("exact tilings") {
  auto plans = plan_layer(mesh(8, 8, 1), layer(8, 8));
  REQUIRE(plans.size() == 1);
  CHECK(plans[0].expected_payloads(1) == 64);
  CHECK(plans[0].active_rows() == 8);
  CHECK(plans[0].col_end == 8);

  auto two = plan_layer(mesh(8, 8, 1), layer(8, 9));
  REQUIRE(two.size() == 2);
  CHECK(two[0].expected_payloads(1) == 64);
  CHECK(two[1].expected_payloads(1) == 8);
  CHECK(two[1].col_end == 1);

  auto tiny = plan_layer(mesh(8, 8, 1), layer(1, 1));
  REQUIRE(tiny.size() == 1);
  CHECK(tiny[0].expected_payloads(1) == 1);
  CHECK(tiny[0].active_rows() == 1);
  CHECK(tiny[0].col_end == 1);
}

TEST_CASE("round count and payload totals match brute-force enumeration") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    int n_vals[4] = {1, 2, 4, 8};
    NetworkConfig cfg = mesh(1 + int(rng() % 16), 1 + int(rng() % 16), n_vals[rng() % 4]);
    LayerShape l = layer(1 + int(rng() % 40), 1 + int(rng() % 200));
    auto plans = plan_layer(cfg, l);
    auto oracle = brute_force_round_payloads(cfg, l);

    REQUIRE(plans.size() == oracle.size());
    long long total = 0;
    for (const RoundPlan& p : plans) {
      long long expect = oracle.at(p.round);
      CHECK(p.expected_payloads(cfg.pes_per_router) == expect);
      total += expect;
      // Per-column PE occupancy sums to the round's filter slots.
      long long pes = 0;
      for (int c = p.col_begin; c < p.col_end; ++c) {
        pes += p.pes_at_col(c, cfg.pes_per_router);
      }
      CHECK(pes == p.active_filter_slots);
      CHECK(p.input_words_per_row == l.macs_per_pe() * cfg.pes_per_router);
    }
    CHECK(total == (long long)l.num_inputs * l.num_filters);
  }
}

TEST_CASE("planning is a pure function of its inputs") {
  NetworkConfig cfg = mesh(8, 8, 2);
  LayerShape l = layer(20, 50, 3, 3);
  auto a = plan_layer(cfg, l);
  auto b = plan_layer(cfg, l);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].round == b[i].round);
    CHECK(a[i].active_filter_slots == b[i].active_filter_slots);
    CHECK(a[i].row_end == b[i].row_end);
  }
}

TEST_CASE("builtin model tables") {
  const ModelTables& t = builtin_models();
  REQUIRE(t.alexnet.size() == 5);
  REQUIRE(t.vgg16.size() == 13);

  CHECK(t.alexnet[0].kernel_r == 11);
  CHECK(t.alexnet[0].channels == 3);
  CHECK(t.alexnet[0].num_inputs == 55);  // (224 + 2*2 - 11)/4 + 1
  CHECK(t.alexnet[1].kernel_r == 5);
  CHECK(t.alexnet[4].num_filters == 256);

  for (const LayerShape& l : t.vgg16) {
    CHECK(l.kernel_r == 3);
    CHECK(l.num_inputs == l.input_h);  // stride 1, pad 1
    l.validate();
  }
  CHECK(t.vgg16[0].channels == 3);
  CHECK(t.vgg16[12].num_filters == 512);
}

TEST_CASE("model resolution") {
  CHECK(resolve_model("alexnet").size() == 5);
  CHECK(resolve_model("vgg16").size() == 13);
  CHECK_THROWS_AS(resolve_model("lenet"), ConfigError);
}

TEST_CASE("shipped data files match the builtin tables") {
  std::string dir = GNOC_SOURCE_DIR "/data/";
  CHECK(resolve_model("custom:" + dir + "alexnet.layers") == builtin_models().alexnet);
  CHECK(resolve_model("custom:" + dir + "vgg16.layers") == builtin_models().vgg16);
}
