#ifndef GNOC_CONFIG_HPP
#define GNOC_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnoc {

enum class StreamingMode : uint8_t { TwoWay, OneWay, None };
enum class ResultMode : uint8_t { Gather, RepetitiveUnicast };

const char* streaming_mode_name(StreamingMode m);
const char* result_mode_name(ResultMode m);
StreamingMode parse_streaming_mode(const std::string& s);
ResultMode parse_result_mode(const std::string& s);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mesh and router parameters. Defaults follow the 8x8 reference setup:
// 2 VCs, 4-flit buffers, 4-cycle router pipeline, 1-cycle links, 128-bit
// flits, 32-bit gather payloads, 2-flit unicast packets, T_MAC = 5.
struct NetworkConfig {
  int mesh_rows = 8;       // N
  int mesh_cols = 8;       // M
  int vcs_per_port = 2;
  int buffer_depth = 4;    // flits per input VC
  int flit_size = 128;     // W, bits
  int pipeline_depth = 4;  // kappa, cycles per router for a head flit
  int link_latency = 1;    // cycles
  int pes_per_router = 1;  // n, one of 1/2/4/8
  int unicast_len = 2;     // L, flits
  int gather_len = 0;      // L', flits; 0 = derive the default from n
  int gather_payload_bits = 32;
  long long delta = -1;    // timeout, cycles; -1 = derive (M-1)*kappa
  int t_mac = 5;
  StreamingMode streaming_mode = StreamingMode::TwoWay;
  ResultMode result_mode = ResultMode::Gather;
  double f_l_override = 0.0;  // 0 = use the per-mode default stream factor

  // Derived quantities ----------------------------------------------------

  int payloads_per_flit() const { return flit_size / gather_payload_bits; }

  // Payload capacity of one gather packet; the head flit carries none.
  int gather_capacity() const { return (gather_len - 1) * payloads_per_flit(); }

  long long default_delta() const {
    return static_cast<long long>(mesh_cols - 1) * pipeline_depth;
  }

  // Reference gather packet length: one header plus enough body/tail flits
  // for an eight-column row of n-PE nodes (3/5/9/17 flits at the default
  // 128/32 sizing).
  int default_gather_len() const {
    int ppf = payloads_per_flit();
    return 1 + (8 * pes_per_router + ppf - 1) / ppf;
  }

  void apply_defaults();  // fills gather_len/delta; invalid sizing is left to validate()
  void validate() const;  // throws ConfigError naming the failed invariant

  std::string serialize() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// One convolution layer mapped onto the mesh. P input-window streams tile
// over rows, Q filters tile over columns x PEs. A PE consumes C*R*R operand
// pairs per round.
struct LayerShape {
  std::string name;
  int input_h = 1;   // H
  int channels = 1;  // C
  int kernel_r = 1;  // R
  int num_inputs = 1;   // P
  int num_filters = 1;  // Q

  long long macs_per_pe() const {
    return static_cast<long long>(channels) * kernel_r * kernel_r;
  }
  void validate() const;
  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

enum class SweepVariable : uint8_t {
  Delta,
  GatherPacketLen,
  PesPerRouter,
  ResultModeVar,
  StreamingModeVar,
};

// A one-dimensional sweep over a base configuration. Every materialized
// point must itself be a valid NetworkConfig.
struct SweepSpec {
  SweepVariable variable = SweepVariable::Delta;
  std::vector<long long> values;
  NetworkConfig base;
  std::vector<LayerShape> layers;

  std::vector<NetworkConfig> materialize() const;
};

struct LoadedConfig {
  NetworkConfig network;
  std::vector<LayerShape> layers;
};

LoadedConfig load_config(const std::string& path);
LoadedConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// eta: payload slots available in one gather packet (header excluded).
int payloads_per_gather_packet(const NetworkConfig& cfg);

// FNV-1a over the canonical serialization, hex string. Used to stamp CSV
// rows so reruns are checkable.
std::string config_hash(const NetworkConfig& cfg);

}  // namespace gnoc

#endif
