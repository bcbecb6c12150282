#include "rdalab/message.hpp"

#include <array>
#include <utility>

namespace rda {

namespace {
constexpr std::array<const char*, 12> kNames = {
    "store", "store_fwd", "get", "get_rsp", "join", "join_rsp", "sync", "sync_rsp",
    "join_subnet", "join_subnet_pull", "join_subnet_pull_rsp", "join_subnet_fwd"};
}

const char* to_string(MsgKind k) { return kNames[size_t(k)]; }

bool msg_kind_from_string(const std::string& s, MsgKind& out) {
  for (size_t k = 0; k < kNames.size(); ++k) {
    if (s == kNames[k]) {
      out = MsgKind(k);
      return true;
    }
  }
  return false;
}

bool is_subnet_msg(MsgKind k) { return k >= MsgKind::join_subnet; }

Payload Payload::store(Handle h, SymbolIndex i, Symbol x) {
  Payload p;
  p.kind = MsgKind::store;
  p.h = std::move(h);
  p.i = i;
  p.x = std::move(x);
  return p;
}

Payload Payload::store_fwd(Handle h, SymbolIndex i, Symbol x) {
  Payload p = store(std::move(h), i, std::move(x));
  p.kind = MsgKind::store_fwd;
  return p;
}

Payload Payload::get(Handle h, SymbolIndex i) {
  Payload p;
  p.kind = MsgKind::get;
  p.h = std::move(h);
  p.i = i;
  return p;
}

Payload Payload::get_rsp(Handle h, SymbolIndex i, Symbol x) {
  Payload p = store(std::move(h), i, std::move(x));
  p.kind = MsgKind::get_rsp;
  return p;
}

Payload Payload::join() {
  Payload p;
  p.kind = MsgKind::join;
  return p;
}

Payload Payload::join_rsp(std::vector<PartyId> ps) {
  Payload p;
  p.kind = MsgKind::join_rsp;
  p.parties = std::move(ps);
  return p;
}

Payload Payload::sync() {
  Payload p;
  p.kind = MsgKind::sync;
  return p;
}

Payload Payload::sync_rsp(std::vector<SymbolTriple> ts) {
  Payload p;
  p.kind = MsgKind::sync_rsp;
  p.triples = std::move(ts);
  return p;
}

Payload Payload::join_subnet(SubnetId sid) {
  Payload p;
  p.kind = MsgKind::join_subnet;
  p.sid = sid;
  return p;
}

Payload Payload::join_subnet_pull(SubnetId sid) {
  Payload p;
  p.kind = MsgKind::join_subnet_pull;
  p.sid = sid;
  return p;
}

Payload Payload::join_subnet_pull_rsp(SubnetId sid, std::vector<PartyId> ps) {
  Payload p;
  p.kind = MsgKind::join_subnet_pull_rsp;
  p.sid = sid;
  p.parties = std::move(ps);
  return p;
}

Payload Payload::join_subnet_fwd(SubnetId sid, PartyId fwd) {
  Payload p;
  p.kind = MsgKind::join_subnet_fwd;
  p.sid = sid;
  p.party = fwd;
  return p;
}

}  // namespace rda
