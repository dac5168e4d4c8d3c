#include "gnoc/router.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace gnoc {

Dir route_compute(Coord local, Coord dst) { return xy_route(local, dst); }

Router::Router(Coord coord, const NetworkConfig& cfg, RouterEnv* env, GatherHooks* hooks)
    : coord_(coord),
      rows_(cfg.mesh_rows),
      cols_(cfg.mesh_cols),
      vcs_(cfg.vcs_per_port),
      depth_(cfg.buffer_depth),
      kappa_(std::max(2, cfg.pipeline_depth)),
      link_lat_(cfg.link_latency),
      env_(env),
      hooks_(hooks) {
  in_vc_.resize(size_t(kNumPorts) * vcs_);
  out_owner_.assign(size_t(kNumPorts) * vcs_, -1);
  credits_.assign(size_t(kNumPorts) * vcs_, 0);
  for (int p = 0; p < kNumPorts; ++p) {
    Dir d = Dir(p);
    int c = 0;
    if (has_neighbor(d)) c = depth_;
    else if (is_sink_port(d)) c = INT_MAX / 2;       // memory element always accepts
    else if (d == Dir::Local) c = INT_MAX / 2;       // NI ejection, one flit/cycle by SA
    for (int v = 0; v < vcs_; ++v) credits_[idx(d, v)] = c;
  }
}

bool Router::has_neighbor(Dir p) const {
  switch (p) {
    case Dir::North: return coord_.row > 0;
    case Dir::South: return coord_.row < rows_ - 1;
    case Dir::West: return coord_.col > 0;
    case Dir::East: return coord_.col < cols_ - 1;
    case Dir::Local: return false;
  }
  return false;
}

bool Router::is_sink_port(Dir p) const {
  return p == Dir::East && coord_.col == cols_ - 1;
}

void Router::push_flit(Dir in_port, int vc, Flit&& f, uint64_t entry_cycle) {
  InVc& s = in_vc_[idx(in_port, vc)];
  if (int(s.buf.size()) >= depth_) {
    throw RouterError("buffer overflow at " + coord_str(coord_) + " port " +
                      dir_name(in_port) + " vc " + std::to_string(vc));
  }
  f.entry_cycle = entry_cycle;
  s.buf.push_back(std::move(f));
  ++buffered_flits_;
}

void Router::add_credit(Dir out_port, int vc, uint64_t visible_cycle) {
  pending_credits_.emplace_back(visible_cycle, idx(out_port, vc));
}

void Router::route_and_gather(InVc& s, Flit& head, uint64_t now) {
  Coord dst = head.dst;
  Dir out;
  if (dst.col >= cols_) {
    out = Dir::East;  // east memory element of dst.row
    if (dst.row != coord_.row) out = xy_route(coord_, Coord{dst.row, int16_t(cols_ - 1)});
    if (out == Dir::Local) out = Dir::East;
  } else {
    out = xy_route(coord_, dst);
  }
  s.out_port = uint8_t(out);

  // Gather load stage (runs with RC/VC, adds no pipeline cycles): reserve
  // local payloads into the packet if it is headed for this row's sink.
  if (head.pt == PacketType::Gather && hooks_ != nullptr &&
      head.dst == Coord{coord_.row, int16_t(cols_)}) {
    int queued = hooks_->reservable_payloads();
    if (queued > 0) {
      if (head.aspace > 0) {
        int take = std::min<int>(queued, head.aspace);
        head.aspace = uint16_t(head.aspace - take);
        std::vector<GatherPayload> got = hooks_->take_payloads(take);
        for (GatherPayload& p : got) s.pending_fill.push_back(p);
        s.load = true;
        hooks_->on_reservation(take, now);
        if (head.aspace == 0 && hooks_->reservable_payloads() > 0) {
          // We filled the packet and still hold leftovers: first to see it full.
          bool first = !head.successor_flag;
          head.successor_flag = true;
          hooks_->on_full_gather_pass(first, now);
        }
      } else {
        bool first = !head.successor_flag;
        head.successor_flag = true;
        hooks_->on_full_gather_pass(first, now);
      }
    }
  }
}

bool Router::try_alloc_vc(int invc_index, uint64_t now) {
  InVc& s = in_vc_[invc_index];
  Dir out = Dir(s.out_port);
  int base = rr_va_[int(out)];
  for (int k = 0; k < vcs_; ++k) {
    int v = (base + k) % vcs_;
    if (out_owner_[idx(out, v)] < 0) {
      out_owner_[idx(out, v)] = int8_t(invc_index);
      s.out_vc = uint8_t(v);
      s.phase = Phase::Active;
      const Flit& head = s.buf.front();
      s.next_st = std::max(head.entry_cycle + kappa_, now + 1);
      rr_va_[int(out)] = (v + 1) % vcs_;
      return true;
    }
  }
  return false;
}

void Router::tick(uint64_t now) {
  if (!pending_credits_.empty()) {
    auto it = pending_credits_.begin();
    while (it != pending_credits_.end()) {
      if (it->first <= now) {
        ++credits_[it->second];
        it = pending_credits_.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (buffered_flits_ == 0) return;

  // Head-of-line pipeline advance: RC then VC allocation.
  for (int i = 0; i < int(in_vc_.size()); ++i) {
    InVc& s = in_vc_[i];
    if (s.buf.empty()) continue;
    Flit& front = s.buf.front();
    if (front.entry_cycle >= now) continue;  // written this cycle or in flight
    if (s.phase == Phase::Idle) {
      if (front.ft != FlitType::Head) {
        throw RouterError("body flit at idle VC head-of-line at " + coord_str(coord_));
      }
      route_and_gather(s, front, now);
      s.rc_cycle = now;
      s.phase = Phase::WaitVc;
      // With a short pipeline, VC allocation shares the RC cycle.
      if (kappa_ <= 2) try_alloc_vc(i, now);
    } else if (s.phase == Phase::WaitVc && now > s.rc_cycle) {
      try_alloc_vc(i, now);
    }
  }

  // Switch allocation + traversal: one flit per output port and per input
  // port each cycle, round-robin among input VCs.
  bool in_port_used[kNumPorts] = {false, false, false, false, false};
  for (int p = 0; p < kNumPorts; ++p) {
    Dir out = Dir(p);
    int nc = int(in_vc_.size());
    int base = rr_sa_[p];
    for (int k = 0; k < nc; ++k) {
      int i = (base + k) % nc;
      InVc& s = in_vc_[i];
      if (s.phase != Phase::Active || Dir(s.out_port) != out || s.buf.empty()) continue;
      int in_port = i / vcs_;
      if (in_port_used[in_port]) continue;
      const Flit& f = s.buf.front();
      if (f.entry_cycle >= now) continue;
      if (now < s.next_st) continue;
      if (f.ft != FlitType::Head && now < f.entry_cycle + 2) continue;
      if (credits_[idx(out, s.out_vc)] <= 0) continue;
      in_port_used[in_port] = true;
      rr_sa_[p] = (i + 1) % nc;
      launch(i, now);
      break;
    }
  }
}

void Router::launch(int invc_index, uint64_t now) {
  InVc& s = in_vc_[invc_index];
  Dir out = Dir(s.out_port);
  int out_vc = s.out_vc;
  Flit f = std::move(s.buf.front());
  s.buf.pop_front();
  --buffered_flits_;
  s.next_st = now + 1;

  // Body/tail gather fill during the otherwise idle RC/VC slots.
  if (s.load && f.ft != FlitType::Head) {
    while (!s.pending_fill.empty() && f.free_slots() > 0) {
      f.payloads.push_back(s.pending_fill.front());
      s.pending_fill.pop_front();
    }
  }
  if (f.ft == FlitType::Tail) {
    if (!s.pending_fill.empty()) {
      throw RouterError("reserved payloads stranded at " + coord_str(coord_) +
                        ": aspace accounting broken");
    }
    s.load = false;
    out_owner_[idx(out, out_vc)] = -1;
    s.phase = Phase::Idle;
  }

  // Credit back to whoever feeds this input buffer.
  int in_port = invc_index / vcs_;
  int in_vc_id = invc_index % vcs_;
  if (has_neighbor(Dir(in_port))) {
    env_->credit_return(coord_, Dir(in_port), in_vc_id, now + 1);
  }

  env_->count_traversal(f);
  env_->trace_launch(coord_, out, f, now);

  if (out == Dir::Local) {
    env_->deliver_local(coord_, std::move(f), now);
    return;
  }

  // Multicast members copy body/tail words as the flit transits.
  if (f.pt == PacketType::Multicast && f.ft != FlitType::Head && f.words > 0) {
    bool row_axis = f.src.row == f.dst.row;
    int bit = row_axis ? coord_.col : coord_.row;
    if (f.mdst & (1u << bit)) env_->multicast_tap(coord_, f, now);
  }

  credits_[idx(out, out_vc)]--;
  env_->count_hop(f);
  if (is_sink_port(out) && !has_neighbor(out)) {
    env_->deliver_sink(coord_.row, std::move(f), now + link_lat_);
    return;
  }
  if (!has_neighbor(out)) {
    throw RouterError("flit routed off-mesh at " + coord_str(coord_) + " port " +
                      dir_name(out));
  }
  env_->deliver(coord_, out, out_vc, std::move(f), now + link_lat_);
}

std::string Router::dump_state() const {
  std::ostringstream os;
  os << "router " << coord_str(coord_) << " buffered=" << buffered_flits_ << "\n";
  for (int p = 0; p < kNumPorts; ++p) {
    for (int v = 0; v < vcs_; ++v) {
      const InVc& s = in_vc_[idx(Dir(p), v)];
      if (s.buf.empty() && s.phase == Phase::Idle) continue;
      os << "  in " << dir_name(Dir(p)) << v << " phase=" << int(s.phase)
         << " buf=" << s.buf.size() << " credits_out=" << credits_[idx(Dir(s.out_port), s.out_vc)];
      if (!s.buf.empty()) os << " front={" << s.buf.front().debug_line() << "}";
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace gnoc
