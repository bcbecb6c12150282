#pragma once

#include <compare>
#include <vector>

#include "rdalab/core.hpp"

namespace rda {

// The two protocols' complete message sets.
enum class MsgKind : std::uint8_t {
  store,
  store_fwd,
  get,
  get_rsp,
  join,
  join_rsp,
  sync,
  sync_rsp,
  join_subnet,
  join_subnet_pull,
  join_subnet_pull_rsp,
  join_subnet_fwd,
};

const char* to_string(MsgKind k);
bool msg_kind_from_string(const std::string& s, MsgKind& out);
bool is_subnet_msg(MsgKind k);

struct SymbolTriple {
  Handle h;
  SymbolIndex i = 0;
  Symbol x;
  friend auto operator<=>(const SymbolTriple&, const SymbolTriple&) = default;
};

struct Payload {
  MsgKind kind = MsgKind::store;
  Handle h;
  SymbolIndex i = 0;
  Symbol x;
  SubnetId sid = 0;
  PartyId party = 0;                 // forwarded party in join_subnet_fwd
  std::vector<PartyId> parties;      // join_rsp and pull_rsp peer sets
  std::vector<SymbolTriple> triples; // sync_rsp contents

  static Payload store(Handle h, SymbolIndex i, Symbol x);
  static Payload store_fwd(Handle h, SymbolIndex i, Symbol x);
  static Payload get(Handle h, SymbolIndex i);
  static Payload get_rsp(Handle h, SymbolIndex i, Symbol x);
  static Payload join();
  static Payload join_rsp(std::vector<PartyId> ps);
  static Payload sync();
  static Payload sync_rsp(std::vector<SymbolTriple> ts);
  static Payload join_subnet(SubnetId sid);
  static Payload join_subnet_pull(SubnetId sid);
  static Payload join_subnet_pull_rsp(SubnetId sid, std::vector<PartyId> ps);
  static Payload join_subnet_fwd(SubnetId sid, PartyId p);
};

// Authenticated point-to-point message. Sent in round sent_at, delivered in
// round sent_at+1, dropped if the recipient is not active then. The engine
// stamps `from`; protocol code cannot forge it.
struct Envelope {
  PartyId from = 0;
  PartyId to = 0;
  Round sent_at = 0;
  Payload payload;
};

}  // namespace rda
