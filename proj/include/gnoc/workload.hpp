#ifndef GNOC_WORKLOAD_HPP
#define GNOC_WORKLOAD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gnoc/config.hpp"

namespace gnoc {

// One tiling step of a layer onto the mesh: which rows/columns are busy,
// how many stream words each axis must deliver, and how many payloads the
// round is expected to produce. Inputs tile over rows, filters over
// columns x PEs; the last round of each dimension may be partial.
struct RoundPlan {
  uint32_t round = 0;
  int row_begin = 0;
  int row_end = 0;  // exclusive
  int col_begin = 0;
  int col_end = 0;  // exclusive
  int active_filter_slots = 0;          // filters assigned across the columns
  long long input_words_per_row = 0;    // stream words each active row receives
  long long weight_words_per_col = 0;   // stream words each active column receives

  int active_rows() const { return row_end - row_begin; }
  int active_cols() const { return col_end - col_begin; }

  // PEs with work at a given column (the tail column may be partial).
  int pes_at_col(int col, int pes_per_router) const {
    if (col < col_begin || col >= col_end) return 0;
    long long ahead = static_cast<long long>(col - col_begin) * pes_per_router;
    long long left = active_filter_slots - ahead;
    if (left <= 0) return 0;
    return static_cast<int>(std::min<long long>(left, pes_per_router));
  }

  long long expected_payloads(int pes_per_router) const {
    (void)pes_per_router;
    return static_cast<long long>(active_rows()) * active_filter_slots;
  }
};

// ceil(P/N) * ceil(Q/(M*n)) rounds covering all (input, filter) pairs.
std::vector<RoundPlan> plan_layer(const NetworkConfig& cfg, const LayerShape& layer);

struct ModelTables {
  std::vector<LayerShape> alexnet;  // 5 convolution layers
  std::vector<LayerShape> vgg16;    // 13 convolution layers
};

const ModelTables& builtin_models();

// "alexnet", "vgg16", or "custom:PATH" (a config file holding [layer]
// sections only).
std::vector<LayerShape> resolve_model(const std::string& name);

}  // namespace gnoc

#endif
