#ifndef GNOC_METRICS_HPP
#define GNOC_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gnoc/flit.hpp"

namespace gnoc {

// Activity-based energy weights, in arbitrary units. Only relative
// comparisons are meaningful.
struct EnergyWeights {
  double e_hop = 1.0;     // per flit-link traversal
  double e_router = 2.0;  // per flit crossing a router
  double e_bus = 0.5;     // per streamed bus word
};

struct LatencyStats {
  uint64_t count = 0;
  uint64_t min = 0;
  uint64_t max = 0;
  uint64_t sum = 0;

  void add(uint64_t v) {
    if (count == 0 || v < min) min = v;
    if (count == 0 || v > max) max = v;
    ++count;
    sum += v;
  }
  double mean() const { return count ? double(sum) / double(count) : 0.0; }
  void merge(const LatencyStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    min = std::min(min, o.min);
    max = std::max(max, o.max);
    count += o.count;
    sum += o.sum;
  }
};

struct PacketRecord {
  uint64_t seq = 0;
  PacketType pt = PacketType::Unicast;
  Coord src{};
  uint32_t round = 0;
  uint64_t inject_cycle = 0;
  uint64_t sink_cycle = 0;  // tail consumed at the memory element
  uint16_t flits = 0;
  uint16_t hops = 0;  // links traversed by the head
};

struct LayerStats {
  std::string name;
  uint64_t wall_cycles = 0;  // first activity to last sink ejection
  uint64_t net_cycles = 0;   // cycles with result traffic in flight
  uint64_t flit_hops = 0;
  uint64_t router_traversals = 0;
  uint64_t bus_words = 0;
  uint64_t packets_unicast = 0;
  uint64_t packets_multicast = 0;
  uint64_t packets_gather = 0;
  uint64_t rounds = 0;
};

// Everything one simulation produces. Reports are plain values; merge() is
// associative with the default-constructed report as identity.
struct SimReport {
  uint64_t wall_cycles = 0;
  uint64_t net_cycles = 0;
  uint64_t flit_hops = 0;
  uint64_t head_hops = 0;
  uint64_t router_traversals = 0;
  uint64_t bus_words = 0;
  uint64_t packets_unicast = 0;
  uint64_t packets_multicast = 0;
  uint64_t packets_gather = 0;
  uint64_t payloads_produced = 0;
  uint64_t payloads_delivered = 0;
  uint64_t rounds_executed = 0;
  LatencyStats packet_latency;
  std::vector<LayerStats> layers;
  std::vector<PacketRecord> packet_log;      // when record_packets
  std::vector<GatherPayload> produced_tags;  // when audit_payloads; sorted
  std::vector<GatherPayload> delivered_tags;
  uint64_t seed = 0;
  std::string cfg_hash;

  uint64_t result_packets() const { return packets_unicast + packets_gather; }
};

double energy(const SimReport& r, const EnergyWeights& w = {});

enum class LatencyMetric { Wall, Net };

struct RatioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (latency ratio, energy ratio) of base over variant; > 1 means the variant
// improves on the base. Throws RatioError on a zero denominator.
std::pair<double, double> improvement_ratios(const SimReport& base, const SimReport& variant,
                                             const EnergyWeights& w = {},
                                             LatencyMetric metric = LatencyMetric::Net);

SimReport merge(SimReport a, const SimReport& b);

// One CSV row per experiment point; see csv_header() for the schema.
std::string csv_header();
std::string csv_row(const std::string& experiment_id, const std::string& mode,
                    const struct NetworkConfig& cfg, const SimReport& r,
                    const EnergyWeights& w = {}, double latency_ratio = 0.0,
                    double energy_ratio = 0.0);

}  // namespace gnoc

#endif
