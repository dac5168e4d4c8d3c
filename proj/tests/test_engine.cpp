#include <doctest.h>

#include <random>
#include <sstream>

#include "gnoc/engine.hpp"
#include "gnoc/metrics.hpp"

using namespace gnoc;

namespace {

NetworkConfig base_cfg(int rows, int cols, int n = 1) {
  NetworkConfig c;
  c.mesh_rows = rows;
  c.mesh_cols = cols;
  c.pes_per_router = n;
  c.apply_defaults();
  return c;
}

// One round, no streaming: payloads appear after T_MAC at the given
// columns of row 0.
std::vector<RoundPlan> one_shot_row(int col_begin, int col_end, int n) {
  RoundPlan p;
  p.round = 0;
  p.row_begin = 0;
  p.row_end = 1;
  p.col_begin = col_begin;
  p.col_end = col_end;
  p.active_filter_slots = (col_end - col_begin) * n;
  return {p};
}

}  // namespace

TEST_CASE("trivial single-node layer, hand-traced schedule") {
  // Stream words land in cycle 0, the MAC starts at 1 and runs 5 cycles,
  // the 3-flit gather packet is injected at 6, its head takes kappa+link
  // to the sink (arrival 11), tail follows at 13.
  NetworkConfig cfg = base_cfg(1, 1);
  LayerShape layer;
  layer.name = "unit";
  SimReport r = run_layer(cfg, layer);
  CHECK(r.wall_cycles == 13);
  CHECK(r.payloads_produced == 1);
  CHECK(r.payloads_delivered == 1);
  CHECK(r.packets_gather == 1);
  CHECK(r.bus_words == 2);  // one input word, one weight word

  NetworkConfig ru = cfg;
  ru.result_mode = ResultMode::RepetitiveUnicast;
  SimReport r2 = run_layer(ru, layer);
  CHECK(r2.wall_cycles == 12);  // 2-flit unicast, one body flit less
  CHECK(r2.packets_unicast == 1);
}

TEST_CASE("five senders on a six-column row: 15 unicast head-hops vs 5") {
  NetworkConfig cfg = base_cfg(1, 6);
  auto plans = one_shot_row(1, 6, 1);

  NetworkConfig ru = cfg;
  ru.result_mode = ResultMode::RepetitiveUnicast;
  SimReport r_ru = run_plans(ru, plans);
  CHECK(r_ru.packets_unicast == 5);
  CHECK(r_ru.head_hops == 15);  // 5+4+3+2+1 links to the east sink

  SimReport r_g = run_plans(cfg, plans);
  CHECK(r_g.packets_gather == 1);
  CHECK(r_g.head_hops == 5);
  CHECK(r_g.payloads_delivered == 5);
}

TEST_CASE("uncongested single-row gather collection latency") {
  // Head walks M routers and M links; the remaining L'-1 flits trail one
  // per cycle: collection = M*(kappa+link) + L' - 1 = 42 on the 8x8 setup.
  NetworkConfig cfg = base_cfg(1, 8);
  SimOptions opts;
  opts.record_packets = true;
  SimReport r = run_plans(cfg, one_shot_row(0, 8, 1), opts);
  REQUIRE(r.packets_gather == 1);
  REQUIRE(r.packet_log.size() == 1);
  const PacketRecord& rec = r.packet_log[0];
  CHECK(rec.sink_cycle - rec.inject_cycle == 42);
  CHECK(rec.hops == 8);
  CHECK(r.net_cycles == 42);
}

TEST_CASE("delta below kappa degenerates to one packet per node") {
  NetworkConfig cfg = base_cfg(1, 8);
  cfg.delta = cfg.pipeline_depth - 1;
  SimReport r = run_plans(cfg, one_shot_row(0, 8, 1));
  // Every node times out and sends a gather packet of its own.
  CHECK(r.packets_gather == 8);
  CHECK(r.packets_unicast == 0);
  CHECK(r.payloads_delivered == 8);
}

TEST_CASE("sixteen columns with eta=8 need exactly two gather packets") {
  NetworkConfig cfg = base_cfg(1, 16);
  cfg.gather_len = 3;  // eta = 8 < 16
  SimReport r = run_plans(cfg, one_shot_row(0, 16, 1));
  CHECK(r.packets_gather == 2);
  CHECK(r.payloads_delivered == 16);
}

TEST_CASE("per-PE unicasts in repetitive unicast mode") {
  NetworkConfig cfg = base_cfg(1, 8, 4);
  cfg.result_mode = ResultMode::RepetitiveUnicast;
  SimReport r = run_plans(cfg, one_shot_row(0, 8, 4));
  CHECK(r.packets_unicast == 32);  // 8 nodes x 4 PEs
  CHECK(r.payloads_delivered == 32);
}

TEST_CASE("multi-round layer with a partial tail round") {
  NetworkConfig cfg = base_cfg(8, 8);
  LayerShape layer;
  layer.name = "p8q9";
  layer.channels = 2;
  layer.kernel_r = 2;
  layer.num_inputs = 8;
  layer.num_filters = 9;
  SimReport r = run_layer(cfg, layer);
  CHECK(r.rounds_executed == 2);
  CHECK(r.payloads_produced == 72);
  CHECK(r.payloads_delivered == 72);
  CHECK(r.produced_tags == r.delivered_tags);
}

TEST_CASE("one-way streaming doubles the stream phase") {
  LayerShape layer;
  layer.name = "s";
  layer.channels = 3;
  layer.kernel_r = 3;
  layer.num_inputs = 2;
  layer.num_filters = 2;

  NetworkConfig two = base_cfg(2, 2);
  NetworkConfig one = two;
  one.streaming_mode = StreamingMode::OneWay;
  SimReport r2 = run_layer(two, layer);
  SimReport r1 = run_layer(one, layer);
  CHECK(r2.payloads_delivered == 4);
  CHECK(r1.payloads_delivered == 4);
  // 27 words two-way vs 54 interleaved on the shared link.
  CHECK(r1.wall_cycles == r2.wall_cycles + 27);
  CHECK(r1.bus_words == r2.bus_words);
}

TEST_CASE("no-streaming mode delivers operands as mesh multicasts") {
  LayerShape layer;
  layer.name = "m";
  layer.channels = 2;
  layer.kernel_r = 2;
  layer.num_inputs = 4;
  layer.num_filters = 4;

  NetworkConfig cfg = base_cfg(4, 4);
  cfg.streaming_mode = StreamingMode::None;
  SimReport r = run_layer(cfg, layer);
  CHECK(r.payloads_delivered == 16);
  CHECK(r.produced_tags == r.delivered_tags);
  CHECK(r.bus_words == 0);
  CHECK(r.packets_multicast > 0);

  NetworkConfig bus = base_cfg(4, 4);
  SimReport rb = run_layer(bus, layer);
  CHECK(rb.wall_cycles < r.wall_cycles);  // the bus beats packetized delivery
}

TEST_CASE("determinism: identical config gives identical reports") {
  LayerShape layer;
  layer.name = "d";
  layer.channels = 2;
  layer.kernel_r = 3;
  layer.num_inputs = 6;
  layer.num_filters = 10;
  NetworkConfig cfg = base_cfg(4, 4, 2);
  SimOptions opts;
  opts.record_packets = true;

  SimReport a = run_layer(cfg, layer, opts);
  SimReport b = run_layer(cfg, layer, opts);
  CHECK(a.wall_cycles == b.wall_cycles);
  CHECK(a.net_cycles == b.net_cycles);
  CHECK(a.flit_hops == b.flit_hops);
  CHECK(a.router_traversals == b.router_traversals);
  CHECK(a.packet_latency.sum == b.packet_latency.sum);
  REQUIRE(a.packet_log.size() == b.packet_log.size());
  for (size_t i = 0; i < a.packet_log.size(); ++i) {
    CHECK(a.packet_log[i].seq == b.packet_log[i].seq);
    CHECK(a.packet_log[i].inject_cycle == b.packet_log[i].inject_cycle);
    CHECK(a.packet_log[i].sink_cycle == b.packet_log[i].sink_cycle);
  }
}

TEST_CASE("deeper buffers never slow the same traffic down") {
  LayerShape layer;
  layer.name = "b";
  layer.channels = 1;
  layer.kernel_r = 2;
  layer.num_inputs = 4;
  layer.num_filters = 16;
  uint64_t prev = UINT64_MAX;
  for (int depth : {2, 4, 8}) {
    NetworkConfig cfg = base_cfg(4, 4, 1);
    cfg.buffer_depth = depth;
    cfg.result_mode = ResultMode::RepetitiveUnicast;
    uint64_t wall = run_layer(cfg, layer).wall_cycles;
    CHECK(wall <= prev);
    prev = wall;
  }
}

TEST_CASE("randomized small configs keep exactly-once delivery") {
  std::mt19937 rng(2024);
  int meshes[] = {2, 3, 4, 6, 8};
  int ns[] = {1, 2, 4, 8};
  for (int trial = 0; trial < 25; ++trial) {
    NetworkConfig cfg = base_cfg(meshes[rng() % 5], meshes[rng() % 5], ns[rng() % 4]);
    cfg.delta = rng() % 80;
    cfg.streaming_mode = StreamingMode(rng() % 3);
    cfg.result_mode = ResultMode(rng() % 2);
    LayerShape layer;
    layer.name = "r" + std::to_string(trial);
    layer.channels = 1 + int(rng() % 3);
    layer.kernel_r = 1 + int(rng() % 3);
    layer.num_inputs = 1 + int(rng() % (2 * cfg.mesh_rows));
    layer.num_filters = 1 + int(rng() % (2 * cfg.mesh_cols * cfg.pes_per_router));
    CAPTURE(trial);
    SimReport r = run_layer(cfg, layer);
    CHECK(r.payloads_produced ==
          uint64_t(layer.num_inputs) * uint64_t(layer.num_filters));
    REQUIRE(r.produced_tags == r.delivered_tags);
  }
}

TEST_CASE("run_network aggregates per-layer reports") {
  NetworkConfig cfg = base_cfg(4, 4);
  std::vector<LayerShape> layers;
  for (int i = 0; i < 3; ++i) {
    LayerShape l;
    l.name = "l" + std::to_string(i);
    l.channels = 1;
    l.kernel_r = 2;
    l.num_inputs = 4;
    l.num_filters = 4;
    layers.push_back(l);
  }
  SimReport total = run_network(cfg, layers);
  REQUIRE(total.layers.size() == 3);
  uint64_t wall_sum = 0;
  for (const LayerStats& ls : total.layers) wall_sum += ls.wall_cycles;
  CHECK(total.wall_cycles == wall_sum);

  SimReport empty = run_network(cfg, {});
  CHECK(empty.wall_cycles == 0);
  CHECK(empty.layers.empty());
}

TEST_CASE("trace log captures launches when enabled") {
  NetworkConfig cfg = base_cfg(1, 2);
  std::ostringstream trace;
  SimOptions opts;
  opts.trace = &trace;
  run_plans(cfg, one_shot_row(0, 2, 1), opts);
  std::string out = trace.str();
  CHECK(out.find("cycle=") != std::string::npos);
  CHECK(out.find("st->E") != std::string::npos);
}

TEST_CASE("misnumbered round plans are rejected") {
  NetworkConfig cfg = base_cfg(1, 2);
  auto plans = one_shot_row(0, 2, 1);
  plans[0].round = 3;
  CHECK_THROWS_AS(run_plans(cfg, plans), ConfigError);
}

TEST_CASE("watchdog flags a run that stops making progress") {
  // A plan that promises more payloads than its nodes can produce never
  // reaches the delivery target; the watchdog must trip, not spin.
  NetworkConfig cfg = base_cfg(1, 2);
  auto plans = one_shot_row(0, 2, 1);
  plans[0].active_filter_slots = 5;  // only 2 slots physically exist
  SimOptions opts;
  opts.watchdog_idle = 500;
  CHECK_THROWS_AS(run_plans(cfg, plans, opts), SimStalled);
}
