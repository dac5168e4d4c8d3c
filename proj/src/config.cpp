#include "gnoc/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace gnoc {

const char* streaming_mode_name(StreamingMode m) {
  switch (m) {
    case StreamingMode::TwoWay: return "two_way";
    case StreamingMode::OneWay: return "one_way";
    case StreamingMode::None: return "none";
  }
  return "?";
}

const char* result_mode_name(ResultMode m) {
  return m == ResultMode::Gather ? "gather" : "repetitive_unicast";
}

StreamingMode parse_streaming_mode(const std::string& s) {
  if (s == "two_way") return StreamingMode::TwoWay;
  if (s == "one_way") return StreamingMode::OneWay;
  if (s == "none") return StreamingMode::None;
  throw ConfigError("unknown streaming_mode '" + s + "' (two_way|one_way|none)");
}

ResultMode parse_result_mode(const std::string& s) {
  if (s == "gather") return ResultMode::Gather;
  if (s == "repetitive_unicast" || s == "ru") return ResultMode::RepetitiveUnicast;
  throw ConfigError("unknown result_mode '" + s + "' (gather|repetitive_unicast)");
}

void NetworkConfig::apply_defaults() {
  if (gather_len == 0) {
    gather_len = gather_payload_bits > 0 && flit_size / gather_payload_bits >= 1
                     ? default_gather_len()
                     : 2;
  }
  if (delta < 0) delta = default_delta();
}

void NetworkConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(mesh_rows >= 1, "mesh_rows must be >= 1");
  need(mesh_cols >= 1, "mesh_cols must be >= 1");
  need(vcs_per_port >= 1, "vcs_per_port must be >= 1");
  need(buffer_depth >= 1, "buffer_depth must be >= 1");
  need(flit_size >= 1, "flit_size must be >= 1");
  need(pipeline_depth >= 1, "router_pipeline_depth must be >= 1");
  need(link_latency >= 1, "link_latency must be >= 1");
  need(pes_per_router == 1 || pes_per_router == 2 || pes_per_router == 4 ||
           pes_per_router == 8,
       "pes_per_router must be one of 1,2,4,8");
  need(unicast_len >= 2, "unicast_packet_len must be >= 2");
  need(gather_len >= 2, "gather_packet_len must be >= 2 (head + >=1 body/tail)");
  need(gather_payload_bits >= 1, "gather_payload_size must be >= 1");
  need(gather_payload_bits <= flit_size, "gather_payload_size exceeds flit size");
  need(flit_size / gather_payload_bits >= 1, "payloads_per_flit must be >= 1");
  need(delta >= 0, "delta must be >= 0");
  need(t_mac >= 1, "t_mac must be >= 1");
  need(f_l_override >= 0.0, "f_l override must be >= 0");
}

void LayerShape::validate() const {
  if (input_h < 1 || channels < 1 || kernel_r < 1 || num_inputs < 1 || num_filters < 1) {
    throw ConfigError("layer '" + name + "': all dimensions must be >= 1");
  }
}

int payloads_per_gather_packet(const NetworkConfig& cfg) {
  if (cfg.gather_len < 2) throw ConfigError("gather_packet_len must be >= 2");
  return cfg.gather_capacity();
}

std::string NetworkConfig::serialize() const {
  std::ostringstream os;
  os << "[network]\n";
  os << "mesh_rows = " << mesh_rows << "\n";
  os << "mesh_cols = " << mesh_cols << "\n";
  os << "vcs_per_port = " << vcs_per_port << "\n";
  os << "buffer_depth = " << buffer_depth << "\n";
  os << "flit_size = " << flit_size << "\n";
  os << "router_pipeline_depth = " << pipeline_depth << "\n";
  os << "link_latency = " << link_latency << "\n";
  os << "pes_per_router = " << pes_per_router << "\n";
  os << "unicast_packet_len = " << unicast_len << "\n";
  os << "gather_packet_len = " << gather_len << "\n";
  os << "gather_payload_size = " << gather_payload_bits << "\n";
  os << "delta = " << delta << "\n";
  os << "t_mac = " << t_mac << "\n";
  os << "streaming_mode = " << streaming_mode_name(streaming_mode) << "\n";
  os << "result_mode = " << result_mode_name(result_mode) << "\n";
  if (f_l_override > 0.0) os << "f_l = " << f_l_override << "\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Parser {
  std::string origin;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  long long to_int(const std::string& key, const std::string& v) const {
    try {
      size_t pos = 0;
      long long x = std::stoll(v, &pos);
      if (pos != v.size()) fail("trailing characters in value for '" + key + "'");
      return x;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      fail("expected integer for '" + key + "', got '" + v + "'");
    }
  }

  double to_double(const std::string& key, const std::string& v) const {
    try {
      size_t pos = 0;
      double x = std::stod(v, &pos);
      if (pos != v.size()) fail("trailing characters in value for '" + key + "'");
      return x;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      fail("expected number for '" + key + "', got '" + v + "'");
    }
  }
};

}  // namespace

LoadedConfig parse_config_text(const std::string& text, const std::string& origin) {
  LoadedConfig out;
  Parser p{origin};
  std::istringstream is(text);
  std::string line;
  std::string section;
  LayerShape* layer = nullptr;

  while (std::getline(is, line)) {
    ++p.line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "network") {
        layer = nullptr;
      } else if (section == "layer") {
        out.layers.emplace_back();
        layer = &out.layers.back();
      } else {
        p.fail("unknown section '" + section + "'");
      }
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) p.fail("empty key or value");

    if (section == "network") {
      NetworkConfig& c = out.network;
      if (key == "mesh_rows") c.mesh_rows = int(p.to_int(key, val));
      else if (key == "mesh_cols") c.mesh_cols = int(p.to_int(key, val));
      else if (key == "vcs_per_port") c.vcs_per_port = int(p.to_int(key, val));
      else if (key == "buffer_depth") c.buffer_depth = int(p.to_int(key, val));
      else if (key == "flit_size") c.flit_size = int(p.to_int(key, val));
      else if (key == "router_pipeline_depth") c.pipeline_depth = int(p.to_int(key, val));
      else if (key == "link_latency") c.link_latency = int(p.to_int(key, val));
      else if (key == "pes_per_router") c.pes_per_router = int(p.to_int(key, val));
      else if (key == "unicast_packet_len") c.unicast_len = int(p.to_int(key, val));
      else if (key == "gather_packet_len") c.gather_len = int(p.to_int(key, val));
      else if (key == "gather_payload_size") c.gather_payload_bits = int(p.to_int(key, val));
      else if (key == "delta") c.delta = p.to_int(key, val);
      else if (key == "t_mac") c.t_mac = int(p.to_int(key, val));
      else if (key == "streaming_mode") c.streaming_mode = parse_streaming_mode(val);
      else if (key == "result_mode") c.result_mode = parse_result_mode(val);
      else if (key == "f_l") c.f_l_override = p.to_double(key, val);
      else p.fail("unknown network key '" + key + "'");
    } else if (section == "layer") {
      if (key == "name") layer->name = val;
      else if (key == "input_h") layer->input_h = int(p.to_int(key, val));
      else if (key == "channels") layer->channels = int(p.to_int(key, val));
      else if (key == "kernel_r") layer->kernel_r = int(p.to_int(key, val));
      else if (key == "num_inputs") layer->num_inputs = int(p.to_int(key, val));
      else if (key == "num_filters") layer->num_filters = int(p.to_int(key, val));
      else p.fail("unknown layer key '" + key + "'");
    } else {
      p.fail("key outside any section");
    }
  }

  out.network.apply_defaults();
  out.network.validate();
  for (const LayerShape& l : out.layers) l.validate();
  return out;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<NetworkConfig> SweepSpec::materialize() const {
  if (values.empty()) throw ConfigError("sweep has no values");
  std::vector<NetworkConfig> out;
  out.reserve(values.size());
  for (long long v : values) {
    NetworkConfig c = base;
    switch (variable) {
      case SweepVariable::Delta: c.delta = v; break;
      case SweepVariable::GatherPacketLen: c.gather_len = int(v); break;
      case SweepVariable::PesPerRouter:
        c.pes_per_router = int(v);
        c.gather_len = 0;  // re-derive the matching packet size
        break;
      case SweepVariable::ResultModeVar: c.result_mode = ResultMode(v); break;
      case SweepVariable::StreamingModeVar: c.streaming_mode = StreamingMode(v); break;
    }
    c.apply_defaults();
    c.validate();
    out.push_back(c);
  }
  return out;
}

std::string config_hash(const NetworkConfig& cfg) {
  std::string s = cfg.serialize();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gnoc
