#ifndef GNOC_FLIT_HPP
#define GNOC_FLIT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnoc/geometry.hpp"

namespace gnoc {

enum class FlitType : uint8_t { Head, Body, Tail };
enum class PacketType : uint8_t { Unicast, Multicast, Gather };

const char* flit_type_name(FlitType ft);
const char* packet_type_name(PacketType pt);

struct PacketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One partial-sum tag: who produced it and in which round. The simulator
// checks delivery and timing; it never computes MAC values.
struct GatherPayload {
  Coord origin;
  uint8_t pe = 0;
  uint32_t round = 0;

  friend bool operator==(const GatherPayload&, const GatherPayload&) = default;
  friend auto operator<=>(const GatherPayload&, const GatherPayload&) = default;
};

// Wire-level flit. Head flits carry the routing fields (FT/PT/ASpace/Src/
// Dst/MDst); body and tail flits carry payload slots. `aspace` mirrors the
// free-slot count of the whole packet and is only meaningful on the head.
struct Flit {
  uint64_t seq = 0;  // packet id, shared by all flits of a packet
  FlitType ft = FlitType::Head;
  PacketType pt = PacketType::Unicast;
  Coord src{};
  Coord dst{};
  uint32_t round = 0;
  uint16_t aspace = 0;          // head: free payload slots left in the packet
  bool successor_flag = false;  // head: a follow-up gather packet was started
  uint32_t mdst = 0;            // head: multicast member mask along the path axis
  uint16_t slot_cap = 0;        // body/tail: payload slots in this flit
  uint32_t words = 0;           // body/tail: stream words carried (multicast)
  std::vector<GatherPayload> payloads;  // body/tail: filled slots
  uint64_t entry_cycle = 0;     // set whenever the flit is written to a buffer

  int free_slots() const { return slot_cap - static_cast<int>(payloads.size()); }
  std::string debug_line() const;  // "seq ft pt aspace src dst slots[...]"
};

// A packet is one head, zero or more bodies, one tail; two flits minimum.
using Packet = std::vector<Flit>;

Packet make_unicast(Coord src, Coord dst, int len_flits, uint32_t round, uint64_t seq,
                    std::vector<GatherPayload> own = {});

// Gather packet with `capacity` payload slots spread over len-1 body/tail
// flits; the initiator's payloads are packed into the earliest slots and
// the head's aspace starts at capacity - |own|.
Packet make_gather(Coord src, Coord dst, int len_flits, int capacity,
                   std::vector<GatherPayload> own, uint32_t round, uint64_t seq,
                   int payloads_per_flit);

// Multicast packet delivering `words` stream words along one axis; mdst is
// the member mask. Each body/tail flit carries one word.
Packet make_multicast(Coord src, Coord dst, uint32_t mdst, int words, uint32_t round,
                      uint64_t seq);

// Append a payload into the next free slot. Throws PacketError when full;
// the caller (router) treats that as "stop loading".
void fill_payload(Flit& flit, const GatherPayload& p);

// Free slots summed over body/tail flits; the whole-packet audit checks it
// against the head's aspace.
int packet_free_slots(const Packet& pkt);
std::vector<GatherPayload> packet_payloads(const Packet& pkt);

}  // namespace gnoc

#endif
