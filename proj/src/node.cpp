#include "gnoc/node.hpp"

#include <algorithm>

namespace gnoc {

NodeAgent::NodeAgent(Coord coord, const NetworkConfig& cfg, const std::vector<RoundPlan>* plans,
                     NodeEnv* env)
    : coord_(coord), cfg_(&cfg), plans_(plans), env_(env) {
  advance_cursor();
}

bool NodeAgent::active_in(const RoundPlan& p) const {
  return coord_.row >= p.row_begin && coord_.row < p.row_end && coord_.col >= p.col_begin &&
         coord_.col < p.col_end && p.pes_at_col(coord_.col, cfg_->pes_per_router) > 0;
}

void NodeAgent::advance_cursor() {
  while (plan_cursor_ < plans_->size() && !active_in((*plans_)[plan_cursor_])) {
    ++plan_cursor_;
  }
}

bool NodeAgent::drained() const {
  return !computing_ && payload_queue_.empty() && out_flits_.empty() &&
         plan_cursor_ >= plans_->size();
}

void NodeAgent::stream_word(StreamKind kind, long long words) {
  if (kind == StreamKind::Input) got_input_ += words;
  else got_weight_ += words;
}

void NodeAgent::start_mac_if_ready(uint64_t now, bool prev_round_done) {
  if (computing_ || plan_cursor_ >= plans_->size()) return;
  if (!payload_queue_.empty()) return;  // previous result not yet picked up
  if (!prev_round_done) return;
  const RoundPlan& p = (*plans_)[plan_cursor_];
  if (got_input_ < p.input_words_per_row || got_weight_ < p.weight_words_per_col) return;
  got_input_ -= p.input_words_per_row;
  got_weight_ -= p.weight_words_per_col;
  computing_ = true;
  computing_round_ = p.round;
  computing_pes_ = p.pes_at_col(coord_.col, cfg_->pes_per_router);
  mac_done_at_ = now + cfg_->t_mac;

  leftmost_ = coord_.col == p.col_begin;
  dist_from_leftmost_ = coord_.col - p.col_begin;

  ++plan_cursor_;
  advance_cursor();
}

void NodeAgent::finish_mac(uint64_t now) {
  computing_ = false;
  pending_round_ = computing_round_;
  std::vector<GatherPayload> tags;
  tags.reserve(computing_pes_);
  for (int pe = 0; pe < computing_pes_; ++pe) {
    GatherPayload p{coord_, uint8_t(pe), computing_round_};
    payload_queue_.push_back(p);
    tags.push_back(p);
  }
  env_->on_payloads_produced(coord_, tags, now);
  env_->on_mac_complete(computing_round_);
  emit_results(now);
}

void NodeAgent::emit_results(uint64_t now) {
  if (cfg_->result_mode == ResultMode::RepetitiveUnicast) {
    emit_unicast_packets(now);
    return;
  }
  if (leftmost_) {
    emit_gather_packets(now);
    return;
  }
  // Interior nodes wait for a passing gather packet. The budget is the
  // configured delta plus the known wire delay from the initiating end of
  // the row (the per-router fine tuning the timeout counter allows).
  timeout_fire_ =
      int64_t(now) + cfg_->delta + int64_t(dist_from_leftmost_) * cfg_->link_latency + 1;
}

void NodeAgent::emit_gather_packets(uint64_t now) {
  (void)now;
  const int capacity = cfg_->gather_capacity();
  const Coord sink{coord_.row, int16_t(cfg_->mesh_cols)};
  while (!payload_queue_.empty()) {
    int take = std::min<int>(capacity, int(payload_queue_.size()));
    std::vector<GatherPayload> own(payload_queue_.begin(), payload_queue_.begin() + take);
    payload_queue_.erase(payload_queue_.begin(), payload_queue_.begin() + take);
    Packet pkt = make_gather(coord_, sink, cfg_->gather_len, capacity, std::move(own),
                             pending_round_, env_->alloc_seq(), cfg_->payloads_per_flit());
    for (Flit& f : pkt) out_flits_.push_back(std::move(f));
    env_->on_result_packet(PacketType::Gather);
  }
  timeout_fire_ = -1;
}

void NodeAgent::emit_unicast_packets(uint64_t now) {
  (void)now;
  const Coord sink{coord_.row, int16_t(cfg_->mesh_cols)};
  while (!payload_queue_.empty()) {
    std::vector<GatherPayload> own{payload_queue_.front()};
    payload_queue_.pop_front();
    Packet pkt = make_unicast(coord_, sink, cfg_->unicast_len, pending_round_,
                              env_->alloc_seq(), std::move(own));
    for (Flit& f : pkt) out_flits_.push_back(std::move(f));
    env_->on_result_packet(PacketType::Unicast);
  }
  timeout_fire_ = -1;
}

void NodeAgent::tick(uint64_t now, bool prev_round_done) {
  if (computing_ && now >= mac_done_at_) finish_mac(now);

  if (initiate_now_) {
    initiate_now_ = false;
    if (!payload_queue_.empty()) emit_gather_packets(now);
  }
  if (timeout_fire_ >= 0 && int64_t(now) >= timeout_fire_) {
    timeout_fire_ = -1;
    if (!payload_queue_.empty()) emit_gather_packets(now);
  }

  start_mac_if_ready(now, prev_round_done);
}

std::vector<GatherPayload> NodeAgent::take_payloads(int k) {
  std::vector<GatherPayload> out(payload_queue_.begin(), payload_queue_.begin() + k);
  payload_queue_.erase(payload_queue_.begin(), payload_queue_.begin() + k);
  return out;
}

void NodeAgent::on_reservation(int taken, uint64_t cycle) {
  (void)taken;
  (void)cycle;
  if (payload_queue_.empty()) timeout_fire_ = -1;
}

void NodeAgent::on_full_gather_pass(bool first, uint64_t cycle) {
  if (payload_queue_.empty()) return;
  if (first) {
    // First node to see the packet full starts the follow-up packet.
    initiate_now_ = true;
  } else {
    // A successor is already on its way; keep waiting for it.
    timeout_fire_ =
        int64_t(cycle) + cfg_->delta + int64_t(dist_from_leftmost_) * cfg_->link_latency + 1;
  }
}

}  // namespace gnoc
