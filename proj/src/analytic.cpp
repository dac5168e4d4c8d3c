#include "gnoc/analytic.hpp"

#include <algorithm>

#include "gnoc/stream_bus.hpp"

namespace gnoc {

namespace {

double stream_factor(const NetworkConfig& cfg) {
  if (cfg.f_l_override > 0.0) return cfg.f_l_override;
  return cfg.streaming_mode == StreamingMode::OneWay ? 0.5 : 1.0;
}

double rounds_real(const NetworkConfig& cfg, const LayerShape& layer) {
  return double(layer.num_inputs) / cfg.mesh_rows * double(layer.num_filters) / cfg.mesh_cols /
         cfg.pes_per_router;
}

}  // namespace

LatencyTerms latency_ru(const NetworkConfig& cfg, const LayerShape& layer, double delta_r) {
  cfg.validate();
  layer.validate();
  if (delta_r < 0) throw ConfigError("congestion term must be >= 0");
  LatencyTerms t;
  t.stream_per_round =
      double(layer.macs_per_pe()) * cfg.pes_per_router / stream_factor(cfg);
  t.compute_per_round = cfg.t_mac;
  t.rounds = rounds_real(cfg, layer);
  t.header_term = double(cfg.mesh_cols) * cfg.pipeline_depth;
  t.body_term = cfg.unicast_len - 1;
  t.congestion = delta_r;
  t.total = t.stream_and_compute() + t.header_term + t.body_term + t.congestion;
  return t;
}

int gather_packets_per_row(const NetworkConfig& cfg) {
  long long eta = payloads_per_gather_packet(cfg);
  if (eta <= 0) throw ConfigError("gather packet has no payload capacity");
  long long mn = static_cast<long long>(cfg.mesh_cols) * cfg.pes_per_router;
  return int((mn + eta - 1) / eta);
}

LatencyTerms latency_gather(const NetworkConfig& cfg, const LayerShape& layer, double delta_g) {
  cfg.validate();
  layer.validate();
  if (delta_g < 0) throw ConfigError("congestion term must be >= 0");
  LatencyTerms t;
  t.stream_per_round =
      double(layer.macs_per_pe()) * cfg.pes_per_router / stream_factor(cfg);
  t.compute_per_round = cfg.t_mac;
  t.rounds = rounds_real(cfg, layer);

  const long long eta = payloads_per_gather_packet(cfg);
  const int packets = gather_packets_per_row(cfg);
  const int n = cfg.pes_per_router;
  for (int i = 0; i < packets; ++i) {
    // (M - i*eta/n) * kappa, exact rational in (M*n - i*eta)/n, never less
    // than one router's worth of pipeline.
    double walk = double(cfg.mesh_cols * int64_t(n) - int64_t(i) * eta) / n *
                  cfg.pipeline_depth;
    walk = std::max(walk, double(cfg.pipeline_depth));
    t.header_term += walk;
    t.body_term += cfg.gather_len - 1;
  }
  t.congestion = delta_g;
  t.total = t.stream_and_compute() + t.header_term + t.body_term + t.congestion;
  return t;
}

ComparisonRow predicted_vs_simulated(const NetworkConfig& cfg, const LayerShape& layer,
                                     const SimOptions& opts) {
  ComparisonRow row;
  row.layer = layer.name;

  NetworkConfig ru_cfg = cfg;
  ru_cfg.result_mode = ResultMode::RepetitiveUnicast;
  NetworkConfig g_cfg = cfg;
  g_cfg.result_mode = ResultMode::Gather;

  SimReport ru = run_layer(ru_cfg, layer, opts);
  SimReport g = run_layer(g_cfg, layer, opts);

  row.predicted_ru = latency_ru(cfg, layer, 0).total;
  row.predicted_gather = latency_gather(cfg, layer, 0).total;
  row.simulated_ru = ru.wall_cycles;
  row.simulated_gather = g.wall_cycles;
  row.residual_ru = double(ru.wall_cycles) - row.predicted_ru;
  row.residual_gather = double(g.wall_cycles) - row.predicted_gather;
  row.ratio_ru_over_gather =
      g.wall_cycles ? double(ru.wall_cycles) / double(g.wall_cycles) : 0.0;
  row.rounds_real = rounds_real(cfg, layer);
  row.rounds_executed = g.rounds_executed;
  return row;
}

}  // namespace gnoc
