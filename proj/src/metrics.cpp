#include "gnoc/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "gnoc/config.hpp"

namespace gnoc {

double energy(const SimReport& r, const EnergyWeights& w) {
  return w.e_hop * double(r.flit_hops) + w.e_router * double(r.router_traversals) +
         w.e_bus * double(r.bus_words);
}

std::pair<double, double> improvement_ratios(const SimReport& base, const SimReport& variant,
                                             const EnergyWeights& w, LatencyMetric metric) {
  uint64_t b = metric == LatencyMetric::Wall ? base.wall_cycles : base.net_cycles;
  uint64_t v = metric == LatencyMetric::Wall ? variant.wall_cycles : variant.net_cycles;
  double be = energy(base, w);
  double ve = energy(variant, w);
  if (v == 0) throw RatioError("variant latency is zero");
  if (ve == 0.0) throw RatioError("variant energy is zero");
  return {double(b) / double(v), be / ve};
}

SimReport merge(SimReport a, const SimReport& b) {
  a.wall_cycles += b.wall_cycles;
  a.net_cycles += b.net_cycles;
  a.flit_hops += b.flit_hops;
  a.head_hops += b.head_hops;
  a.router_traversals += b.router_traversals;
  a.bus_words += b.bus_words;
  a.packets_unicast += b.packets_unicast;
  a.packets_multicast += b.packets_multicast;
  a.packets_gather += b.packets_gather;
  a.payloads_produced += b.payloads_produced;
  a.payloads_delivered += b.payloads_delivered;
  a.rounds_executed += b.rounds_executed;
  a.packet_latency.merge(b.packet_latency);
  a.layers.insert(a.layers.end(), b.layers.begin(), b.layers.end());
  a.packet_log.insert(a.packet_log.end(), b.packet_log.begin(), b.packet_log.end());
  a.produced_tags.insert(a.produced_tags.end(), b.produced_tags.begin(), b.produced_tags.end());
  a.delivered_tags.insert(a.delivered_tags.end(), b.delivered_tags.begin(),
                          b.delivered_tags.end());
  if (a.cfg_hash.empty()) a.cfg_hash = b.cfg_hash;
  return a;
}

std::string csv_header() {
  return "experiment_id,mode,N,M,n,delta,gather_len,total_cycles,net_cycles,flit_hops,"
         "router_traversals,bus_words,packets,energy,latency_ratio,energy_ratio,"
         "config_hash,seed";
}

std::string csv_row(const std::string& experiment_id, const std::string& mode,
                    const NetworkConfig& cfg, const SimReport& r, const EnergyWeights& w,
                    double latency_ratio, double energy_ratio) {
  char num[712];
  snprintf(num, sizeof num,
           "%d,%d,%d,%lld,%d,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
           ",%" PRIu64 ",%.4f,%.6f,%.6f",
           cfg.mesh_rows, cfg.mesh_cols, cfg.pes_per_router, cfg.delta, cfg.gather_len,
           r.wall_cycles, r.net_cycles, r.flit_hops, r.router_traversals, r.bus_words,
           r.result_packets() + r.packets_multicast, energy(r, w), latency_ratio, energy_ratio);
  std::ostringstream os;
  os << experiment_id << "," << mode << "," << num << "," << r.cfg_hash << "," << r.seed;
  return os.str();
}

}  // namespace gnoc
