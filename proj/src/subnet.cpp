#include "rdalab/subnet.hpp"

#include <algorithm>

namespace rda {
namespace subnet {

namespace {

bool valid_sid(SubnetId sid, const Params& p) { return sid >= 1 && sid <= p.n_subnets(); }

// Single point where peers enter a node's map; applies the optimized
// profile's storage filter and logs the add so the auditor can replay the
// knows-relation.
void merge_one(Runtime& rt, Node& self, SubnetId sid, PartyId q) {
  if (rt.optimized() && is_row_subnet(sid, rt.params()) && self.aux == 0) {
    if (sid != row_subnet_id(self.cell.row, rt.params())) return;
    if (rt.oracle().row(q) != self.cell.row) return;
  }
  auto [it, inserted] = self.peers[sid].insert(q);
  (void)it;
  if (inserted) {
    Record r;
    r.kind = RecordKind::peer_learned;
    r.round = rt.now();
    r.party = self.id;
    r.sid = sid;
    r.other = q;
    rt.log().add(std::move(r));
  }
}

void merge(Runtime& rt, Node& self, SubnetId sid, const std::vector<PartyId>& ps) {
  for (PartyId q : ps) merge_one(rt, self, sid, q);
}

// Optimized senders omit row-subnet entries that do not live in the
// subnet's row; recipients that keep cross-row entries learn them from
// direct join announcements instead.
std::vector<PartyId> sendable_peers(Runtime& rt, const Node& self, SubnetId sid) {
  std::vector<PartyId> out;
  auto it = self.peers.find(sid);
  if (it == self.peers.end()) return out;
  const bool filter = rt.optimized() && is_row_subnet(sid, rt.params());
  const int row = filter ? subnet_row(sid, rt.params()) : 0;
  for (PartyId q : it->second) {
    if (filter && rt.oracle().row(q) != row) continue;
    out.push_back(q);
  }
  return out;
}

bool drop_message(Runtime& rt, const Node& self, const Envelope& env) {
  const Params& p = rt.params();
  if (!valid_sid(env.payload.sid, p)) return true;  // adversarial noise
  if (!rt.optimized()) return false;
  SubnetId sid = env.payload.sid;
  if (is_row_subnet(sid, p) && self.aux == 0 &&
      (env.payload.kind == MsgKind::join_subnet || env.payload.kind == MsgKind::join_subnet_pull))
    return true;
  if (is_col_subnet(sid, p) && rt.oracle().col(env.from) != subnet_col(sid, p)) return true;
  return false;
}

}  // namespace

void create(Runtime& rt, Node& self, SubnetId sid, const std::vector<PartyId>& ps) {
  Record r;
  r.kind = RecordKind::create_subnet;
  r.round = rt.now();
  r.party = self.id;
  r.sid = sid;
  r.parties = ps;
  rt.log().add(std::move(r));
  merge(rt, self, sid, ps);
}

void join(Runtime& rt, Node& self, SubnetId sid, PartyId via) {
  Record r;
  r.kind = RecordKind::join_subnet;
  r.round = rt.now();
  r.party = self.id;
  r.sid = sid;
  r.other = via;
  rt.log().add(std::move(r));

  merge_one(rt, self, sid, self.id);
  merge_one(rt, self, sid, via);
  rt.send(self.id, via, Payload::join_subnet(sid));
  Continuation c;
  c.kind = Continuation::Kind::subnet_pull;
  c.sid = sid;
  c.via = via;
  rt.schedule_at(rt.now() + 4, self.id, std::move(c));
}

std::vector<PartyId> get_peers(Runtime& rt, Node& self, SubnetId sid, bool internal) {
  std::vector<PartyId> out;
  auto it = self.peers.find(sid);
  if (it != self.peers.end()) out.assign(it->second.begin(), it->second.end());
  Record r;
  r.kind = RecordKind::get_peers;
  r.round = rt.now();
  r.party = self.id;
  r.sid = sid;
  r.flag = internal;
  r.parties = out;
  rt.log().add(std::move(r));
  return out;
}

void pull_timer(Runtime& rt, Node& self, SubnetId sid, PartyId via) {
  rt.send(self.id, via, Payload::join_subnet_pull(sid));
}

void handle(Runtime& rt, Node& self, const Envelope& env) {
  if (drop_message(rt, self, env)) return;
  const SubnetId sid = env.payload.sid;
  switch (env.payload.kind) {
    case MsgKind::join_subnet: {
      std::vector<PartyId> snapshot = sendable_peers(rt, self, sid);
      merge_one(rt, self, sid, env.from);
      // forward the joiner, unless the subnet's row would discard it anyway
      if (rt.optimized() && is_row_subnet(sid, rt.params()) &&
          rt.oracle().row(env.from) != subnet_row(sid, rt.params()))
        break;
      for (PartyId q : snapshot) rt.send(self.id, q, Payload::join_subnet_fwd(sid, env.from));
      break;
    }
    case MsgKind::join_subnet_pull:
      rt.send(self.id, env.from, Payload::join_subnet_pull_rsp(sid, sendable_peers(rt, self, sid)));
      break;
    case MsgKind::join_subnet_pull_rsp:
      merge(rt, self, sid, env.payload.parties);
      break;
    case MsgKind::join_subnet_fwd:
      merge_one(rt, self, sid, env.payload.party);
      break;
    default:
      break;
  }
}

}  // namespace subnet
}  // namespace rda
