#ifndef GNOC_STREAM_BUS_HPP
#define GNOC_STREAM_BUS_HPP

#include <cstdint>
#include <vector>

#include "gnoc/config.hpp"
#include "gnoc/node.hpp"
#include "gnoc/workload.hpp"

namespace gnoc {

// Broadcast bus from a memory-side stream unit to every active node of one
// row (inputs) or column (weights). Delivery is one word per cycle to all
// members at once, gated so a round's words are only sent after the
// previous round's MACs finished everywhere (the credit check that keeps
// NI queues from overflowing). In one-way mode a single row link carries
// input and weight words interleaved.
class StreamUnit {
 public:
  enum class Axis : uint8_t { RowInput, ColWeight, SharedRow };

  struct Job {
    uint32_t round = 0;
    size_t plan_index = 0;
    long long input_words = 0;
    long long weight_words = 0;
  };

  StreamUnit(Axis axis, int index) : axis_(axis), index_(index) {}

  void add_job(const Job& j) { jobs_.push_back(j); }
  bool done() const { return cur_ == jobs_.size(); }
  const Job* current() const { return done() ? nullptr : &jobs_[cur_]; }

  // Returns words delivered this cycle (0 or 1). `agents` spans the active
  // members of the current job, already resolved by the engine.
  template <typename DeliverFn>
  int tick(bool round_gate_open, DeliverFn&& deliver) {
    if (done() || !round_gate_open) return 0;
    Job& j = jobs_[cur_];
    StreamKind kind;
    if (axis_ == Axis::RowInput) kind = StreamKind::Input;
    else if (axis_ == Axis::ColWeight) kind = StreamKind::Weight;
    else {
      // Shared link alternates kinds while both streams have words left.
      bool input_left = sent_input_ < j.input_words;
      bool weight_left = sent_weight_ < j.weight_words;
      if (input_left && weight_left) kind = parity_ ? StreamKind::Weight : StreamKind::Input;
      else kind = input_left ? StreamKind::Input : StreamKind::Weight;
    }
    long long& sent = kind == StreamKind::Input ? sent_input_ : sent_weight_;
    long long total = kind == StreamKind::Input ? j.input_words : j.weight_words;
    if (sent >= total) {
      advance_if_done(j);
      return 0;
    }
    deliver(kind);
    ++sent;
    parity_ = !parity_;
    advance_if_done(j);
    return 1;
  }

  Axis axis() const { return axis_; }
  int index() const { return index_; }

 private:
  void advance_if_done(const Job& j) {
    bool in_done = sent_input_ >= j.input_words;
    bool w_done = sent_weight_ >= j.weight_words;
    if (in_done && w_done) {
      ++cur_;
      sent_input_ = sent_weight_ = 0;
      parity_ = false;
    }
  }

  Axis axis_;
  int index_;
  std::vector<Job> jobs_;
  size_t cur_ = 0;
  long long sent_input_ = 0;
  long long sent_weight_ = 0;
  bool parity_ = false;
};

// Cycles one round of streaming occupies: C*R*R*n for two-way (input and
// weight buses run in parallel), twice that for the shared one-way link.
long long streaming_cycles(const NetworkConfig& cfg, const LayerShape& layer);

}  // namespace gnoc

#endif
