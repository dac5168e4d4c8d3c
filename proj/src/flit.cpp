#include "gnoc/flit.hpp"

#include <sstream>

namespace gnoc {

const char* flit_type_name(FlitType ft) {
  switch (ft) {
    case FlitType::Head: return "H";
    case FlitType::Body: return "B";
    case FlitType::Tail: return "T";
  }
  return "?";
}

const char* packet_type_name(PacketType pt) {
  switch (pt) {
    case PacketType::Unicast: return "U";
    case PacketType::Multicast: return "M";
    case PacketType::Gather: return "G";
  }
  return "?";
}

std::string Flit::debug_line() const {
  std::ostringstream os;
  os << seq << " " << flit_type_name(ft) << " " << packet_type_name(pt);
  if (ft == FlitType::Head) {
    os << " aspace=" << aspace;
  }
  os << " " << coord_str(src) << "->" << coord_str(dst);
  if (ft != FlitType::Head) {
    os << " slots[";
    for (size_t i = 0; i < payloads.size(); ++i) {
      if (i) os << " ";
      os << coord_str(payloads[i].origin) << "#" << int(payloads[i].pe) << "@"
         << payloads[i].round;
    }
    for (int i = int(payloads.size()); i < slot_cap; ++i) os << (i ? " _" : "_");
    os << "]";
  }
  return os.str();
}

static void check_len(int len_flits) {
  if (len_flits < 2) {
    throw PacketError("packet length below minimum of 2 flits (head + tail)");
  }
}

Packet make_unicast(Coord src, Coord dst, int len_flits, uint32_t round, uint64_t seq,
                    std::vector<GatherPayload> own) {
  check_len(len_flits);
  if (src == dst) throw PacketError("self-addressed packet " + coord_str(src));
  Packet pkt;
  pkt.reserve(len_flits);
  for (int i = 0; i < len_flits; ++i) {
    Flit f;
    f.seq = seq;
    f.pt = PacketType::Unicast;
    f.src = src;
    f.dst = dst;
    f.round = round;
    f.ft = i == 0 ? FlitType::Head : (i == len_flits - 1 ? FlitType::Tail : FlitType::Body);
    pkt.push_back(std::move(f));
  }
  // Unicast payload tags ride in the first body flit; the slots are private
  // to the packet, so routers never load into them.
  if (!own.empty()) {
    pkt[1].slot_cap = uint16_t(own.size());
    pkt[1].payloads = std::move(own);
  }
  return pkt;
}

Packet make_gather(Coord src, Coord dst, int len_flits, int capacity,
                   std::vector<GatherPayload> own, uint32_t round, uint64_t seq,
                   int payloads_per_flit) {
  check_len(len_flits);
  if (src == dst) throw PacketError("self-addressed packet " + coord_str(src));
  if (static_cast<int>(own.size()) > capacity) {
    throw PacketError("initiator holds " + std::to_string(own.size()) +
                      " payloads, gather capacity is " + std::to_string(capacity));
  }
  Packet pkt;
  pkt.reserve(len_flits);
  int remaining_cap = capacity;
  size_t next_own = 0;
  for (int i = 0; i < len_flits; ++i) {
    Flit f;
    f.seq = seq;
    f.pt = PacketType::Gather;
    f.src = src;
    f.dst = dst;
    f.round = round;
    if (i == 0) {
      f.ft = FlitType::Head;
      f.aspace = static_cast<uint16_t>(capacity - static_cast<int>(own.size()));
    } else {
      f.ft = i == len_flits - 1 ? FlitType::Tail : FlitType::Body;
      int cap = std::min(payloads_per_flit, remaining_cap);
      remaining_cap -= cap;
      f.slot_cap = static_cast<uint16_t>(cap);
      while (next_own < own.size() && f.free_slots() > 0) {
        f.payloads.push_back(own[next_own++]);
      }
    }
    pkt.push_back(std::move(f));
  }
  return pkt;
}

Packet make_multicast(Coord src, Coord dst, uint32_t mdst, int words, uint32_t round,
                      uint64_t seq) {
  int len_flits = 1 + std::max(1, words);
  Packet pkt;
  pkt.reserve(len_flits);
  for (int i = 0; i < len_flits; ++i) {
    Flit f;
    f.seq = seq;
    f.pt = PacketType::Multicast;
    f.src = src;
    f.dst = dst;
    f.round = round;
    if (i == 0) {
      f.ft = FlitType::Head;
      f.mdst = mdst;
    } else {
      f.ft = i == len_flits - 1 ? FlitType::Tail : FlitType::Body;
      f.mdst = mdst;
      f.words = i <= words ? 1 : 0;
    }
    pkt.push_back(std::move(f));
  }
  return pkt;
}

void fill_payload(Flit& flit, const GatherPayload& p) {
  if (flit.ft == FlitType::Head) throw PacketError("head flit carries no payload slots");
  if (flit.free_slots() <= 0) throw PacketError("no free slot in flit");
  flit.payloads.push_back(p);
}

int packet_free_slots(const Packet& pkt) {
  int n = 0;
  for (const Flit& f : pkt) {
    if (f.ft != FlitType::Head) n += f.free_slots();
  }
  return n;
}

std::vector<GatherPayload> packet_payloads(const Packet& pkt) {
  std::vector<GatherPayload> out;
  for (const Flit& f : pkt) {
    if (f.ft != FlitType::Head) {
      out.insert(out.end(), f.payloads.begin(), f.payloads.end());
    }
  }
  return out;
}

}  // namespace gnoc
