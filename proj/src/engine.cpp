#include "gnoc/engine.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "gnoc/node.hpp"
#include "gnoc/router.hpp"
#include "gnoc/stream_bus.hpp"

namespace gnoc {

namespace {

Coord step(Coord c, Dir d) {
  switch (d) {
    case Dir::North: return {int16_t(c.row - 1), c.col};
    case Dir::South: return {int16_t(c.row + 1), c.col};
    case Dir::East: return {c.row, int16_t(c.col + 1)};
    case Dir::West: return {c.row, int16_t(c.col - 1)};
    case Dir::Local: return c;
  }
  return c;
}

Dir opposite(Dir d) {
  switch (d) {
    case Dir::North: return Dir::South;
    case Dir::South: return Dir::North;
    case Dir::East: return Dir::West;
    case Dir::West: return Dir::East;
    case Dir::Local: return Dir::Local;
  }
  return d;
}

struct PacketTrack {
  uint64_t inject_cycle = 0;
  Coord src{};
  uint32_t round = 0;
  PacketType pt = PacketType::Unicast;
  uint16_t flits_seen = 0;
  uint16_t head_aspace = 0;
  int free_slot_sum = 0;
  bool head_seen = false;
};

// Memory-side injector used in the no-streaming baseline: inputs and
// weights enter the mesh as multicast packets from the west/north edges.
struct Injector {
  bool row_axis = true;
  int index = 0;
  std::vector<StreamUnit::Job> jobs;
  size_t cur = 0;
  size_t plan = 0;
  long long words_left = 0;
  std::deque<Flit> packet;
  int vc = -1;

  bool done() const { return cur == jobs.size() && packet.empty() && words_left == 0; }
};

class Engine final : public RouterEnv, public NodeEnv {
 public:
  Engine(const NetworkConfig& cfg, const std::vector<RoundPlan>& plans, const SimOptions& opts)
      : cfg_(cfg), plans_(plans), opts_(opts) {
    cfg_.validate();
    for (size_t k = 0; k < plans_.size(); ++k) {
      if (plans_[k].round != k) throw ConfigError("round plans must be numbered 0..K-1");
    }
    const int R = cfg_.mesh_rows, C = cfg_.mesh_cols;
    agents_.reserve(size_t(R) * C);
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c < C; ++c) {
        agents_.emplace_back(Coord{int16_t(r), int16_t(c)}, cfg_, &plans_, this);
      }
    }
    routers_.reserve(size_t(R) * C);
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c < C; ++c) {
        Coord at{int16_t(r), int16_t(c)};
        routers_.emplace_back(at, cfg_, this, &agent_at(at));
      }
    }
    mac_remaining_.resize(plans_.size(), 0);
    for (const RoundPlan& p : plans_) {
      mac_remaining_[p.round] =
          uint64_t(p.active_rows()) * uint64_t(p.col_end - p.col_begin);
      expected_payloads_ += uint64_t(p.expected_payloads(cfg_.pes_per_router));
    }
    build_stream_sources();
  }

  SimReport run(const std::string& layer_name);

  // RouterEnv ------------------------------------------------------------
  void deliver(Coord from, Dir dir, int vc, Flit&& f, uint64_t entry) override {
    router_at(step(from, dir)).push_flit(opposite(dir), vc, std::move(f), entry);
  }

  void deliver_sink(int row, Flit&& f, uint64_t arrival) override {
    --in_flight_;
    last_sink_ = std::max(last_sink_, arrival);
    result_retire_.emplace_back(arrival, 1);
    PacketTrack& t = tracks_[f.seq];
    ++t.flits_seen;
    if (f.ft == FlitType::Head) {
      t.head_seen = true;
      t.head_aspace = f.aspace;
    } else {
      if (f.pt == PacketType::Gather) t.free_slot_sum += f.free_slots();
      for (const GatherPayload& p : f.payloads) {
        ++delivered_payloads_;
        if (opts_.audit_payloads) report_.delivered_tags.push_back(p);
      }
    }
    if (f.ft == FlitType::Tail) {
      if (f.pt == PacketType::Gather && t.head_seen && int(t.head_aspace) != t.free_slot_sum) {
        throw RouterError("gather aspace audit failed at sink row " + std::to_string(row) +
                          ": head says " + std::to_string(t.head_aspace) + ", packet has " +
                          std::to_string(t.free_slot_sum) + " free slots");
      }
      report_.packet_latency.add(arrival - t.inject_cycle);
      if (opts_.record_packets) {
        PacketRecord rec;
        rec.seq = f.seq;
        rec.pt = t.pt;
        rec.src = t.src;
        rec.round = f.round;
        rec.inject_cycle = t.inject_cycle;
        rec.sink_cycle = arrival;
        rec.flits = t.flits_seen;
        rec.hops = uint16_t(cfg_.mesh_cols - t.src.col);
        report_.packet_log.push_back(rec);
      }
    }
  }

  void deliver_local(Coord at, Flit&& f, uint64_t cycle) override {
    (void)cycle;
    --in_flight_;
    if (f.pt == PacketType::Multicast && f.ft != FlitType::Head && f.words > 0) {
      bool row_axis = f.src.row == f.dst.row;
      agent_at(at).stream_word(row_axis ? StreamKind::Input : StreamKind::Weight, f.words);
    }
  }

  void credit_return(Coord at, Dir toward_upstream, int vc, uint64_t cycle) override {
    Coord up = step(at, toward_upstream);
    router_at(up).add_credit(opposite(toward_upstream), vc, cycle);
  }

  void multicast_tap(Coord at, const Flit& f, uint64_t cycle) override {
    (void)cycle;
    bool row_axis = f.src.row == f.dst.row;
    agent_at(at).stream_word(row_axis ? StreamKind::Input : StreamKind::Weight, f.words);
  }

  void count_hop(const Flit& f) override {
    ++report_.flit_hops;
    if (f.ft == FlitType::Head) ++report_.head_hops;
  }

  void count_traversal(const Flit& f) override {
    (void)f;
    ++report_.router_traversals;
    progress_ = true;
  }

  void trace_launch(Coord at, Dir out, const Flit& f, uint64_t cycle) override {
    if (opts_.trace) {
      *opts_.trace << "cycle=" << cycle << " router=" << coord_str(at) << " st->"
                   << dir_name(out) << " " << f.debug_line() << "\n";
    }
  }

  // NodeEnv ----------------------------------------------------------------
  uint64_t alloc_seq() override {
    tracks_.emplace_back();
    return next_seq_++;
  }

  void on_payloads_produced(Coord at, const std::vector<GatherPayload>& tags,
                            uint64_t cycle) override {
    (void)at;
    (void)cycle;
    report_.payloads_produced += tags.size();
    if (opts_.audit_payloads) {
      report_.produced_tags.insert(report_.produced_tags.end(), tags.begin(), tags.end());
    }
    progress_ = true;
  }

  void on_mac_complete(uint32_t round) override {
    --mac_remaining_[round];
    progress_ = true;
  }

  void on_result_packet(PacketType pt) override {
    if (pt == PacketType::Gather) ++report_.packets_gather;
    else if (pt == PacketType::Unicast) ++report_.packets_unicast;
    else ++report_.packets_multicast;
  }

 private:
  Router& router_at(Coord c) { return routers_[size_t(c.row) * cfg_.mesh_cols + c.col]; }
  NodeAgent& agent_at(Coord c) { return agents_[size_t(c.row) * cfg_.mesh_cols + c.col]; }

  bool round_gate(uint32_t round) const {
    return round == 0 || mac_remaining_[round - 1] == 0;
  }

  void build_stream_sources() {
    const int n_rows = cfg_.mesh_rows, n_cols = cfg_.mesh_cols;
    if (cfg_.streaming_mode == StreamingMode::None) {
      if (n_rows > 32 || n_cols > 32) {
        throw ConfigError("multicast member masks support meshes up to 32x32");
      }
      injectors_.resize(size_t(n_rows) + n_cols);
      for (int r = 0; r < n_rows; ++r) {
        injectors_[r].row_axis = true;
        injectors_[r].index = r;
      }
      for (int c = 0; c < n_cols; ++c) {
        injectors_[size_t(n_rows) + c].row_axis = false;
        injectors_[size_t(n_rows) + c].index = c;
      }
      for (size_t k = 0; k < plans_.size(); ++k) {
        const RoundPlan& p = plans_[k];
        if (p.input_words_per_row > 0) {
          for (int r = p.row_begin; r < p.row_end; ++r) {
            injectors_[r].jobs.push_back({p.round, k, p.input_words_per_row, 0});
          }
        }
        if (p.weight_words_per_col > 0) {
          for (int c = p.col_begin; c < p.col_end; ++c) {
            injectors_[size_t(n_rows) + c].jobs.push_back({p.round, k, 0, p.weight_words_per_col});
          }
        }
      }
      return;
    }
    const bool one_way = cfg_.streaming_mode == StreamingMode::OneWay;
    for (int r = 0; r < n_rows; ++r) {
      units_.emplace_back(one_way ? StreamUnit::Axis::SharedRow : StreamUnit::Axis::RowInput, r);
    }
    if (!one_way) {
      for (int c = 0; c < n_cols; ++c) units_.emplace_back(StreamUnit::Axis::ColWeight, c);
    }
    for (size_t k = 0; k < plans_.size(); ++k) {
      const RoundPlan& p = plans_[k];
      for (int r = p.row_begin; r < p.row_end; ++r) {
        if (one_way) {
          if (p.input_words_per_row > 0 || p.weight_words_per_col > 0) {
            units_[r].add_job({p.round, k, p.input_words_per_row, p.weight_words_per_col});
          }
        } else if (p.input_words_per_row > 0) {
          units_[r].add_job({p.round, k, p.input_words_per_row, 0});
        }
      }
      if (!one_way && p.weight_words_per_col > 0) {
        for (int c = p.col_begin; c < p.col_end; ++c) {
          units_[size_t(n_rows) + c].add_job({p.round, k, 0, p.weight_words_per_col});
        }
      }
    }
  }

  void tick_agent_injection(NodeAgent& a, uint64_t now) {
    if (a.out_flits().empty()) return;
    Flit& f = a.out_flits().front();
    Router& rt = router_at(f.src);
    if (f.ft == FlitType::Head) {
      int chosen = -1;
      for (int v = 0; v < cfg_.vcs_per_port; ++v) {
        if (rt.buffer_space(Dir::Local, v) > 0) {
          chosen = v;
          break;
        }
      }
      if (chosen < 0) return;
      a.set_inject_vc(chosen);
      PacketTrack& t = tracks_[f.seq];
      t.inject_cycle = now;
      t.src = f.src;
      t.round = f.round;
      t.pt = f.pt;
    } else if (rt.buffer_space(Dir::Local, a.inject_vc()) <= 0) {
      return;
    }
    bool tail = f.ft == FlitType::Tail;
    rt.push_flit(Dir::Local, a.inject_vc(), std::move(f), now);
    a.out_flits().pop_front();
    ++in_flight_;
    ++result_in_flight_;
    progress_ = true;
    if (tail) a.set_inject_vc(-1);
  }

  void tick_injector(Injector& inj, uint64_t now) {
    if (inj.packet.empty()) {
      if (inj.words_left == 0) {
        if (inj.cur == inj.jobs.size()) return;
        const StreamUnit::Job& j = inj.jobs[inj.cur];
        if (!round_gate(j.round)) return;
        inj.words_left = inj.row_axis ? j.input_words : j.weight_words;
        inj.plan = j.plan_index;
        ++inj.cur;
      }
      const RoundPlan& p = plans_[inj.plan];
      long long w = std::min<long long>(inj.words_left, cfg_.gather_len - 1);
      uint32_t mask = 0;
      Coord src, dst;
      if (inj.row_axis) {
        for (int c = p.col_begin; c < p.col_end; ++c) mask |= 1u << c;
        src = {int16_t(inj.index), int16_t(-1)};
        dst = {int16_t(inj.index), int16_t(p.col_end - 1)};
      } else {
        for (int r = p.row_begin; r < p.row_end; ++r) mask |= 1u << r;
        src = {int16_t(-1), int16_t(inj.index)};
        dst = {int16_t(p.row_end - 1), int16_t(inj.index)};
      }
      Packet pkt = make_multicast(src, dst, mask, int(w), p.round, alloc_seq());
      on_result_packet(PacketType::Multicast);
      for (Flit& f : pkt) inj.packet.push_back(std::move(f));
      inj.words_left -= w;
    }
    // Drip one flit per cycle into the boundary router.
    Flit& f = inj.packet.front();
    Coord at = inj.row_axis ? Coord{int16_t(inj.index), 0} : Coord{0, int16_t(inj.index)};
    Dir port = inj.row_axis ? Dir::West : Dir::North;
    Router& rt = router_at(at);
    if (f.ft == FlitType::Head) {
      int chosen = -1;
      for (int v = 0; v < cfg_.vcs_per_port; ++v) {
        if (rt.buffer_space(port, v) > 0) {
          chosen = v;
          break;
        }
      }
      if (chosen < 0) return;
      inj.vc = chosen;
      tracks_[f.seq].inject_cycle = now;
      tracks_[f.seq].src = f.src;
      tracks_[f.seq].pt = f.pt;
    } else if (rt.buffer_space(port, inj.vc) <= 0) {
      return;
    }
    rt.push_flit(port, inj.vc, std::move(f), now);
    inj.packet.pop_front();
    ++in_flight_;
    progress_ = true;
  }

  bool finished() {
    if (delivered_payloads_ != expected_payloads_ || in_flight_ != 0) return false;
    for (const StreamUnit& u : units_) {
      if (!u.done()) return false;
    }
    for (const Injector& i : injectors_) {
      if (!i.done()) return false;
    }
    for (const NodeAgent& a : agents_) {
      if (!a.drained()) return false;
    }
    return true;
  }

  std::string stall_dump(uint64_t cycle) const {
    std::ostringstream os;
    os << "no progress for " << opts_.watchdog_idle << " cycles (cycle " << cycle
       << "): delivered " << delivered_payloads_ << "/" << expected_payloads_
       << " payloads, " << in_flight_ << " flits in flight\n";
    int shown = 0;
    for (const Router& r : routers_) {
      if (!r.quiescent() && shown < 8) {
        os << r.dump_state();
        ++shown;
      }
    }
    return os.str();
  }

  NetworkConfig cfg_;
  std::vector<RoundPlan> plans_;
  SimOptions opts_;
  std::vector<NodeAgent> agents_;
  std::vector<Router> routers_;
  std::vector<StreamUnit> units_;
  std::vector<Injector> injectors_;

  std::vector<PacketTrack> tracks_;
  std::vector<uint64_t> mac_remaining_;
  std::deque<std::pair<uint64_t, int>> result_retire_;  // (arrival cycle, flits)

  SimReport report_;
  uint64_t next_seq_ = 0;
  uint64_t expected_payloads_ = 0;
  uint64_t delivered_payloads_ = 0;
  int64_t in_flight_ = 0;
  int64_t result_in_flight_ = 0;
  uint64_t busy_cycles_ = 0;
  uint64_t last_sink_ = 0;
  bool progress_ = false;
};

SimReport Engine::run(const std::string& layer_name) {
  uint64_t cycle = 0;
  uint64_t last_progress = 0;
  while (!finished()) {
    if (cycle - last_progress > opts_.watchdog_idle) {
      throw SimStalled(stall_dump(cycle));
    }
    progress_ = false;
    for (Router& r : routers_) r.tick(cycle);
    for (NodeAgent& a : agents_) {
      size_t k = a.plan_cursor();
      bool gate = k >= plans_.size() || round_gate(plans_[k].round);
      a.tick(cycle, gate);
      tick_agent_injection(a, cycle);
    }
    for (StreamUnit& u : units_) {
      const StreamUnit::Job* j = u.current();
      if (!j) continue;
      if (!round_gate(j->round)) continue;
      const RoundPlan& p = plans_[j->plan_index];
      int delivered = u.tick(true, [&](StreamKind kind) {
        if (u.axis() == StreamUnit::Axis::ColWeight) {
          for (int r = p.row_begin; r < p.row_end; ++r) {
            agent_at({int16_t(r), int16_t(u.index())}).stream_word(kind);
          }
        } else {
          for (int c = p.col_begin; c < p.col_end; ++c) {
            agent_at({int16_t(u.index()), int16_t(c)}).stream_word(kind);
          }
        }
      });
      if (delivered > 0) {
        report_.bus_words += delivered;
        progress_ = true;
      }
    }
    for (Injector& i : injectors_) tick_injector(i, cycle);
    while (!result_retire_.empty() && result_retire_.front().first <= cycle) {
      result_in_flight_ -= result_retire_.front().second;
      result_retire_.pop_front();
    }
    if (result_in_flight_ > 0) ++busy_cycles_;
    if (progress_) last_progress = cycle;
    ++cycle;
  }

  report_.wall_cycles = last_sink_;
  report_.payloads_delivered = delivered_payloads_;
  report_.net_cycles = busy_cycles_;
  report_.rounds_executed = plans_.size();
  if (opts_.audit_payloads) {
    std::sort(report_.produced_tags.begin(), report_.produced_tags.end());
    std::sort(report_.delivered_tags.begin(), report_.delivered_tags.end());
  }
  LayerStats ls;
  ls.name = layer_name;
  ls.wall_cycles = report_.wall_cycles;
  ls.net_cycles = report_.net_cycles;
  ls.flit_hops = report_.flit_hops;
  ls.router_traversals = report_.router_traversals;
  ls.bus_words = report_.bus_words;
  ls.packets_unicast = report_.packets_unicast;
  ls.packets_multicast = report_.packets_multicast;
  ls.packets_gather = report_.packets_gather;
  ls.rounds = plans_.size();
  report_.layers.push_back(std::move(ls));
  report_.seed = opts_.seed;
  report_.cfg_hash = config_hash(cfg_);
  return std::move(report_);
}

}  // namespace

SimReport run_plans(const NetworkConfig& cfg, const std::vector<RoundPlan>& plans,
                    const SimOptions& opts, const std::string& layer_name) {
  Engine engine(cfg, plans, opts);
  return engine.run(layer_name);
}

SimReport run_layer(const NetworkConfig& cfg, const LayerShape& layer, const SimOptions& opts) {
  return run_plans(cfg, plan_layer(cfg, layer), opts, layer.name);
}

SimReport run_network(const NetworkConfig& cfg, const std::vector<LayerShape>& layers,
                      const SimOptions& opts) {
  SimReport total;
  for (const LayerShape& l : layers) {
    total = merge(std::move(total), run_layer(cfg, l, opts));
  }
  total.seed = opts.seed;
  total.cfg_hash = config_hash(cfg);
  return total;
}

}  // namespace gnoc
