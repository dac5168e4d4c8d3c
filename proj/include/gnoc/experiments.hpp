#ifndef GNOC_EXPERIMENTS_HPP
#define GNOC_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gnoc/analytic.hpp"
#include "gnoc/config.hpp"
#include "gnoc/engine.hpp"
#include "gnoc/metrics.hpp"

namespace gnoc {

struct Csv {
  std::string header;
  std::vector<std::string> rows;

  std::string str() const;
  void write(const std::string& path) const;
};

// One convolution-shaped result round on a single mesh row, the traffic
// scenario the timeout and packet-size studies use.
std::vector<RoundPlan> single_row_job(const NetworkConfig& cfg);

std::vector<LayerShape> smoke_subset(const std::string& model);

// Timeout study: delta in {kappa-1, kappa, 2k, ..., 7k, 10k} for each PE
// count on `mesh` columns; latency and energy normalized to the delta<kappa
// baseline.
Csv exp_delta_sweep(int mesh, uint64_t seed);

// Gather packet sizing: one row-covering packet against two half-size
// packets, on 8x8 and 16x16 for each PE count, normalized to repetitive
// unicast.
Csv exp_packet_size(uint64_t seed);

// Gather vs repetitive unicast over whole models and both mesh sizes;
// ratios use the result-traffic busy cycles plus the activity energy.
Csv exp_main_comparison(const std::string& model, bool smoke, int jobs, uint64_t seed);

// Streaming architectures: two-way and one-way against operand delivery by
// mesh multicast, per layer.
Csv exp_streaming_modes(const std::string& model, int mesh, int pes, bool smoke, int jobs,
                        uint64_t seed);

// Closed-form predictions against simulation, per layer.
Csv exp_predict(const std::string& model, int mesh, int pes, bool smoke, uint64_t seed);

// Plain run of a model/config; one row per layer plus a total row.
Csv exp_run(const NetworkConfig& cfg, const std::vector<LayerShape>& layers, int jobs,
            uint64_t seed);

// Runs tasks 0..count-1 on up to `jobs` threads; callers index their own
// result slots so output order stays deterministic.
void parallel_for_ordered(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace gnoc

#endif
