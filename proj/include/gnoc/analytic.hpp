#ifndef GNOC_ANALYTIC_HPP
#define GNOC_ANALYTIC_HPP

#include <string>
#include <vector>

#include "gnoc/config.hpp"
#include "gnoc/engine.hpp"

namespace gnoc {

// Closed-form latency decomposition for one convolution layer. The rounds
// factor is kept real-valued (P/N * Q/M * 1/n); execution rounds are
// integral, and predicted_vs_simulated reports both so the gap stays
// visible.
struct LatencyTerms {
  double stream_per_round = 0;   // C*R*R*n / f_l
  double rounds = 0;             // real-valued
  double compute_per_round = 0;  // T_MAC
  double header_term = 0;        // head-flit walk(s)
  double body_term = 0;          // trailing flits
  double congestion = 0;         // supplied Delta
  double total = 0;

  double stream_and_compute() const { return (stream_per_round + compute_per_round) * rounds; }
};

// Repetitive-unicast latency:
//   (C*R*R*n/f_l + T_MAC) * P/N * Q/M * 1/n  +  M*kappa + L - 1 + Delta_R
LatencyTerms latency_ru(const NetworkConfig& cfg, const LayerShape& layer, double delta_r = 0);

// Gather latency: the same stream/compute term plus
//   sum_{i=0}^{ceil(M*n/eta)-1} ((M - i*eta/n)*kappa + L' - 1)  +  Delta_G
// where each header walk is floored at one router (kappa). The eta/n ratio
// is evaluated in exact rational form.
LatencyTerms latency_gather(const NetworkConfig& cfg, const LayerShape& layer,
                            double delta_g = 0);

int gather_packets_per_row(const NetworkConfig& cfg);  // ceil(M*n / eta)

struct ComparisonRow {
  std::string layer;
  double predicted_ru = 0;
  double predicted_gather = 0;
  uint64_t simulated_ru = 0;
  uint64_t simulated_gather = 0;
  double residual_ru = 0;      // simulated - predicted
  double residual_gather = 0;
  double ratio_ru_over_gather = 0;
  double rounds_real = 0;
  uint64_t rounds_executed = 0;
};

// Runs both result modes on the layer and compares against the Delta=0
// predictions (wall-clock runtime).
ComparisonRow predicted_vs_simulated(const NetworkConfig& cfg, const LayerShape& layer,
                                     const SimOptions& opts = {});

}  // namespace gnoc

#endif
