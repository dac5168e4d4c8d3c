#ifndef GNOC_ROUTER_HPP
#define GNOC_ROUTER_HPP

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "gnoc/config.hpp"
#include "gnoc/flit.hpp"
#include "gnoc/geometry.hpp"

namespace gnoc {

struct RouterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Engine-side wiring for one router: flit movement, credits, statistics.
struct RouterEnv {
  virtual ~RouterEnv() = default;
  // Flit launched toward the neighbour in direction `dir`; it becomes
  // visible in that router's input buffer (VC `vc`) at `entry_cycle`.
  virtual void deliver(Coord from, Dir dir, int vc, Flit&& f, uint64_t entry_cycle) = 0;
  // Flit launched east off the mesh into the row's memory element.
  virtual void deliver_sink(int row, Flit&& f, uint64_t arrival_cycle) = 0;
  // Flit ejected through the local port into the NI.
  virtual void deliver_local(Coord at, Flit&& f, uint64_t cycle) = 0;
  // Credit freed for the upstream router's output (dir is the direction of
  // the upstream neighbour as seen from `at`).
  virtual void credit_return(Coord at, Dir toward_upstream, int vc, uint64_t cycle) = 0;
  // A multicast body/tail flit passed this member node in transit.
  virtual void multicast_tap(Coord at, const Flit& f, uint64_t cycle) = 0;
  virtual void count_hop(const Flit& f) = 0;
  virtual void count_traversal(const Flit& f) = 0;
  virtual void trace_launch(Coord, Dir, const Flit&, uint64_t) {}
};

// Payload pickup interface implemented by the node agent behind a router.
struct GatherHooks {
  virtual ~GatherHooks() = default;
  virtual int reservable_payloads() const = 0;
  virtual std::vector<GatherPayload> take_payloads(int k) = 0;
  // A gather head addressed to this row passed with no usable space.
  // `first` is true when this node is the first to see the packet full.
  virtual void on_full_gather_pass(bool first, uint64_t cycle) = 0;
  virtual void on_reservation(int taken, uint64_t cycle) = 0;
};

// Input-queued wormhole router with a kappa-cycle head pipeline (RC, VC,
// SA, ST at kappa = 4), credit-based flow control, XY routing, round-robin
// VC and switch allocation, and the gather-load head/body stages.
//
// Timing contract, per flit with buffer-entry cycle a:
//   head: RC at a+1, VC alloc from a+2, launch (ST) at a+kappa; so one hop
//   costs kappa + link_latency buffer-to-buffer with no contention.
//   body/tail: launch no earlier than a+2 and one cycle behind the
//   preceding flit of the packet. kappa < 2 is clamped to 2.
class Router {
 public:
  Router(Coord coord, const NetworkConfig& cfg, RouterEnv* env, GatherHooks* hooks);

  void tick(uint64_t now);

  // Buffer write, from a link, the NI, or a boundary injector.
  void push_flit(Dir in_port, int vc, Flit&& f, uint64_t entry_cycle);
  void add_credit(Dir out_port, int vc, uint64_t visible_cycle);

  int buffer_space(Dir in_port, int vc) const {
    return depth_ - int(in_vc_[idx(in_port, vc)].buf.size());
  }
  bool quiescent() const { return buffered_flits_ == 0; }
  int buffered_flits() const { return buffered_flits_; }
  Coord coord() const { return coord_; }

  std::string dump_state() const;  // watchdog diagnostics

 private:
  enum class Phase : uint8_t { Idle, WaitVc, Active };

  struct InVc {
    std::deque<Flit> buf;
    Phase phase = Phase::Idle;
    uint8_t out_port = 0;
    uint8_t out_vc = 0;
    uint64_t rc_cycle = 0;
    uint64_t next_st = 0;  // earliest launch cycle for the front flit
    bool load = false;     // gather load latch
    std::deque<GatherPayload> pending_fill;
  };

  int idx(Dir p, int vc) const { return int(p) * vcs_ + vc; }
  bool is_sink_port(Dir p) const;
  bool has_neighbor(Dir p) const;
  void route_and_gather(InVc& vc_state, Flit& head, uint64_t now);
  bool try_alloc_vc(int invc_index, uint64_t now);
  void launch(int invc_index, uint64_t now);

  Coord coord_;
  int rows_, cols_, vcs_, depth_, kappa_, link_lat_;
  RouterEnv* env_;
  GatherHooks* hooks_;
  std::vector<InVc> in_vc_;
  std::vector<int8_t> out_owner_;  // invc index owning each (outport, vc), -1 free
  std::vector<int> credits_;
  std::vector<std::pair<uint64_t, int>> pending_credits_;
  int rr_va_[kNumPorts] = {0, 0, 0, 0, 0};
  int rr_sa_[kNumPorts] = {0, 0, 0, 0, 0};
  int buffered_flits_ = 0;
};

// XY output port for a head destined to `dst` (dst.col == mesh_cols means
// the east sink of dst.row).
Dir route_compute(Coord local, Coord dst);

}  // namespace gnoc

#endif
