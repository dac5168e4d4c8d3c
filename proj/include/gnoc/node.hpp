#ifndef GNOC_NODE_HPP
#define GNOC_NODE_HPP

#include <cstdint>
#include <deque>
#include <vector>

#include "gnoc/config.hpp"
#include "gnoc/flit.hpp"
#include "gnoc/router.hpp"
#include "gnoc/workload.hpp"

namespace gnoc {

enum class StreamKind : uint8_t { Input, Weight };

// Engine services a node needs while producing results.
struct NodeEnv {
  virtual ~NodeEnv() = default;
  virtual uint64_t alloc_seq() = 0;
  virtual void on_payloads_produced(Coord at, const std::vector<GatherPayload>& tags,
                                    uint64_t cycle) = 0;
  virtual void on_mac_complete(uint32_t round) = 0;
  virtual void on_result_packet(PacketType pt) = 0;
};

// The network interface plus its n PEs. Streamed words are absorbed into
// the PE register files as they arrive; a round's MAC phase starts once all
// words are in, the previous round's payloads have left the node, and the
// previous round has completed mesh-wide. Completed payloads wait for a
// passing gather packet; the delta timeout bounds that wait.
class NodeAgent : public GatherHooks {
 public:
  NodeAgent(Coord coord, const NetworkConfig& cfg, const std::vector<RoundPlan>* plans,
            NodeEnv* env);

  // Engine tick, after routers. prev_round_done reports whether every MAC
  // of the preceding round has finished (mesh-wide serialization point).
  void tick(uint64_t now, bool prev_round_done);

  void stream_word(StreamKind kind, long long words = 1);

  // Flits awaiting injection into the router's local port.
  std::deque<Flit>& out_flits() { return out_flits_; }
  int inject_vc() const { return inject_vc_; }
  void set_inject_vc(int vc) { inject_vc_ = vc; }

  bool drained() const;
  bool active_in(const RoundPlan& p) const;
  size_t plan_cursor() const { return plan_cursor_; }
  uint32_t pending_round() const { return pending_round_; }

  // GatherHooks
  int reservable_payloads() const override { return int(payload_queue_.size()); }
  std::vector<GatherPayload> take_payloads(int k) override;
  void on_full_gather_pass(bool first, uint64_t cycle) override;
  void on_reservation(int taken, uint64_t cycle) override;

 private:
  void start_mac_if_ready(uint64_t now, bool prev_round_done);
  void finish_mac(uint64_t now);
  void emit_results(uint64_t now);
  void emit_gather_packets(uint64_t now);
  void emit_unicast_packets(uint64_t now);
  void advance_cursor();

  Coord coord_;
  const NetworkConfig* cfg_;
  const std::vector<RoundPlan>* plans_;
  NodeEnv* env_;

  size_t plan_cursor_ = 0;
  long long got_input_ = 0;
  long long got_weight_ = 0;

  bool computing_ = false;
  uint64_t mac_done_at_ = 0;
  uint32_t computing_round_ = 0;
  int computing_pes_ = 0;

  // Role within the row for the round whose payloads are pending.
  bool leftmost_ = false;
  int dist_from_leftmost_ = 0;
  uint32_t pending_round_ = 0;

  std::deque<GatherPayload> payload_queue_;
  int64_t timeout_fire_ = -1;
  bool initiate_now_ = false;

  std::deque<Flit> out_flits_;
  int inject_vc_ = -1;
};

}  // namespace gnoc

#endif
