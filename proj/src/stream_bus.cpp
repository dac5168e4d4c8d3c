#include "gnoc/stream_bus.hpp"

namespace gnoc {

long long streaming_cycles(const NetworkConfig& cfg, const LayerShape& layer) {
  long long words = layer.macs_per_pe() * cfg.pes_per_router;
  if (cfg.f_l_override > 0.0) {
    return static_cast<long long>(double(words) / cfg.f_l_override + 0.5);
  }
  switch (cfg.streaming_mode) {
    case StreamingMode::TwoWay: return words;
    case StreamingMode::OneWay: return 2 * words;
    case StreamingMode::None: return words;  // equation form; packetized in simulation
  }
  return words;
}

}  // namespace gnoc
