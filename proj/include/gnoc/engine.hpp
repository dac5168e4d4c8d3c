#ifndef GNOC_ENGINE_HPP
#define GNOC_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnoc/config.hpp"
#include "gnoc/metrics.hpp"
#include "gnoc/workload.hpp"

namespace gnoc {

// Thrown when the watchdog sees no progress for `watchdog_idle` cycles;
// carries a dump of the stuck routers so livelock is distinguishable from
// a long run.
struct SimStalled : std::runtime_error {
  explicit SimStalled(const std::string& msg) : std::runtime_error(msg) {}
};

struct SimOptions {
  uint64_t seed = 0;
  bool record_packets = false;
  bool audit_payloads = true;
  uint64_t watchdog_idle = 1000000;
  std::ostream* trace = nullptr;
};

// Deterministic cycle-driven simulation of one layer (or a hand-built
// round list). Tick order within a cycle: link arrivals are folded into
// buffer entry stamps, then routers, then NI/agents, then stream units and
// boundary injectors; credits turn around with one cycle of delay.
SimReport run_plans(const NetworkConfig& cfg, const std::vector<RoundPlan>& plans,
                    const SimOptions& opts = {}, const std::string& layer_name = "custom");

SimReport run_layer(const NetworkConfig& cfg, const LayerShape& layer,
                    const SimOptions& opts = {});

// Layers execute back to back with a full barrier between them; the report
// is the merge of the per-layer reports.
SimReport run_network(const NetworkConfig& cfg, const std::vector<LayerShape>& layers,
                      const SimOptions& opts = {});

}  // namespace gnoc

#endif
