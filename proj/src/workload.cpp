#include "gnoc/workload.hpp"

namespace gnoc {

std::vector<RoundPlan> plan_layer(const NetworkConfig& cfg, const LayerShape& layer) {
  layer.validate();
  const int n = cfg.pes_per_router;
  const int rows = cfg.mesh_rows;
  const int cols = cfg.mesh_cols;
  const long long slots_per_round = static_cast<long long>(cols) * n;

  const int row_tiles = int((layer.num_inputs + rows - 1) / rows);
  const int col_tiles = int((layer.num_filters + slots_per_round - 1) / slots_per_round);
  const long long words = layer.macs_per_pe() * n;

  std::vector<RoundPlan> plans;
  plans.reserve(size_t(row_tiles) * col_tiles);
  uint32_t round = 0;
  for (int it = 0; it < row_tiles; ++it) {
    int active_rows = std::min(rows, layer.num_inputs - it * rows);
    for (int jt = 0; jt < col_tiles; ++jt) {
      long long slots =
          std::min<long long>(slots_per_round, layer.num_filters - jt * slots_per_round);
      RoundPlan p;
      p.round = round++;
      p.row_begin = 0;
      p.row_end = active_rows;
      p.col_begin = 0;
      p.col_end = int((slots + n - 1) / n);
      p.active_filter_slots = int(slots);
      p.input_words_per_row = words;
      p.weight_words_per_col = words;
      plans.push_back(p);
    }
  }
  return plans;
}

namespace {

LayerShape conv(const char* name, int h, int c, int r, int p, int q) {
  LayerShape l;
  l.name = name;
  l.input_h = h;
  l.channels = c;
  l.kernel_r = r;
  l.num_inputs = p;
  l.num_filters = q;
  return l;
}

// P is the output feature-map height from the standard sliding-window
// count (H + 2*pad - R)/stride + 1 with each model's published stride and
// padding; Q is the filter count. Shapes follow the torchvision model
// definitions. The same tables ship as data files under data/.
ModelTables build_tables() {
  ModelTables t;
  t.alexnet = {
      conv("conv1", 224, 3, 11, 55, 64),    // stride 4, pad 2
      conv("conv2", 27, 64, 5, 27, 192),    // pad 2
      conv("conv3", 13, 192, 3, 13, 384),   // pad 1
      conv("conv4", 13, 384, 3, 13, 256),   // pad 1
      conv("conv5", 13, 256, 3, 13, 256),   // pad 1
  };
  // All VGG-16 convolutions are 3x3, stride 1, pad 1, so P equals the
  // input height.
  t.vgg16 = {
      conv("conv1_1", 224, 3, 3, 224, 64),   conv("conv1_2", 224, 64, 3, 224, 64),
      conv("conv2_1", 112, 64, 3, 112, 128), conv("conv2_2", 112, 128, 3, 112, 128),
      conv("conv3_1", 56, 128, 3, 56, 256),  conv("conv3_2", 56, 256, 3, 56, 256),
      conv("conv3_3", 56, 256, 3, 56, 256),  conv("conv4_1", 28, 256, 3, 28, 512),
      conv("conv4_2", 28, 512, 3, 28, 512),  conv("conv4_3", 28, 512, 3, 28, 512),
      conv("conv5_1", 14, 512, 3, 14, 512),  conv("conv5_2", 14, 512, 3, 14, 512),
      conv("conv5_3", 14, 512, 3, 14, 512),
  };
  return t;
}

}  // namespace

const ModelTables& builtin_models() {
  static const ModelTables tables = build_tables();
  return tables;
}

std::vector<LayerShape> resolve_model(const std::string& name) {
  if (name == "alexnet") return builtin_models().alexnet;
  if (name == "vgg16") return builtin_models().vgg16;
  if (name.rfind("custom:", 0) == 0) {
    LoadedConfig lc = load_config(name.substr(7));
    if (lc.layers.empty()) throw ConfigError("model file has no [layer] sections: " + name);
    return lc.layers;
  }
  throw ConfigError("unknown model '" + name + "' (alexnet|vgg16|custom:PATH)");
}

}  // namespace gnoc
