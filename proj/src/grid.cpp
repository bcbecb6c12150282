#include "rdalab/grid.hpp"

#include <algorithm>

namespace rda {
namespace grid {

namespace {

void write_symbol(Runtime& rt, Node& self, const Handle& h, SymbolIndex i, const Symbol& x) {
  auto [it, inserted] = self.symbols.emplace(std::make_pair(h, i), x);
  (void)it;
  if (!inserted) return;  // position-binding: an existing entry equals x
  Record r;
  r.kind = RecordKind::symbol_write;
  r.round = rt.now();
  r.party = self.id;
  r.h = h;
  r.i = i;
  r.x = x;
  rt.log().add(std::move(r));
}

std::vector<PartyId> peers_in_cell(Runtime& rt, Node& self, int row, int col) {
  std::vector<PartyId> in_row =
      subnet::get_peers(rt, self, row_subnet_id(row, rt.params()), /*internal=*/true);
  std::vector<PartyId> out;
  for (PartyId q : in_row)
    if (rt.oracle().cell(q) == Cell{row, col}) out.push_back(q);
  return out;
}

}  // namespace

void init(Runtime& rt, Node& self, const std::vector<JoinSpec>& initial) {
  Record rec;
  rec.kind = RecordKind::init;
  rec.round = rt.now();
  rec.party = self.id;
  rec.flag = self.aux == 1;
  rt.log().add(std::move(rec));

  const Params& p = rt.params();
  for (int r = 1; r <= p.k1; ++r) {
    std::vector<PartyId> row_parties;
    for (const auto& spec : initial)
      if (rt.oracle().row(spec.party) == r || spec.aux == 1) row_parties.push_back(spec.party);
    bool member = self.cell.row == r || self.aux == 1;
    if (member) subnet::create(rt, self, row_subnet_id(r, p), row_parties);
  }
  std::vector<PartyId> col_parties;
  for (const auto& spec : initial)
    if (rt.oracle().col(spec.party) == self.cell.col) col_parties.push_back(spec.party);
  subnet::create(rt, self, col_subnet_id(self.cell.col, p), col_parties);

  self.symbols.clear();
  self.is_bootstrap = self.aux == 1;
  self.initial = true;
  self.join_round = 0;
  self.fully_joined = true;
}

void join(Runtime& rt, Node& self, const std::vector<PartyId>& bootstraps, int aux) {
  const Params& p = rt.params();
  const Round tau = rt.now();
  Record rec;
  rec.kind = RecordKind::join_start;
  rec.round = tau;
  rec.party = self.id;
  rec.flag = aux == 1;
  rec.parties = bootstraps;
  rt.log().add(std::move(rec));

  self.join_round = tau;
  self.symbols.clear();
  self.is_bootstrap = aux == 1;
  self.join_bootstraps = std::set<PartyId>(bootstraps.begin(), bootstraps.end());

  if (self.is_bootstrap) {
    for (PartyId b : bootstraps)
      for (int r = 1; r <= p.k1; ++r) subnet::join(rt, self, row_subnet_id(r, p), b);
  } else {
    for (PartyId b : bootstraps) subnet::join(rt, self, row_subnet_id(self.cell.row, p), b);
  }

  self.col_parties.clear();
  for (PartyId b : bootstraps) rt.send(self.id, b, Payload::join());

  Continuation collect;
  collect.kind = Continuation::Kind::join_collect_cols;
  rt.schedule_at(tau + 2, self.id, std::move(collect));
  Continuation sync;
  sync.kind = Continuation::Kind::join_sync;
  rt.schedule_at(tau + 2 + p.subnet_delay, self.id, std::move(sync));
}

void continue_join_collect(Runtime& rt, Node& self) {
  const SubnetId sid_c = col_subnet_id(self.cell.col, rt.params());
  for (const auto& list : self.join_rsp_buffer) {
    for (PartyId q : list)
      if (!self.col_parties.count(q)) subnet::join(rt, self, sid_c, q);
    self.col_parties.insert(list.begin(), list.end());
  }
  self.join_rsp_buffer.clear();
}

void continue_join_sync(Runtime& rt, Node& self) {
  const SubnetId sid_c = col_subnet_id(self.cell.col, rt.params());
  std::vector<PartyId> col = subnet::get_peers(rt, self, sid_c, /*internal=*/true);
  self.col_parties = std::set<PartyId>(col.begin(), col.end());
  for (PartyId q : col) rt.send(self.id, q, Payload::sync());
  self.fully_joined = true;
  Record rec;
  rec.kind = RecordKind::join_finish;
  rec.round = rt.now();
  rec.party = self.id;
  rt.log().add(std::move(rec));
}

void store(Runtime& rt, Node& self, const Handle& h, SymbolIndex i, const Symbol& x) {
  const bool ok = rt.predicate().eval(h, i, x);
  Record rec;
  rec.kind = RecordKind::store_call;
  rec.round = rt.now();
  rec.party = self.id;
  rec.h = h;
  rec.i = i;
  rec.x = x;
  rec.flag = ok;
  rt.log().add(std::move(rec));
  if (!ok) return;

  const int c = col_for_symbol(i, rt.params());
  for (PartyId q : peers_in_cell(rt, self, self.cell.row, c))
    rt.send(self.id, q, Payload::store(h, i, x));
}

void get(Runtime& rt, Node& self, const Handle& h, SymbolIndex i) {
  const Round tau = rt.now();
  Record rec;
  rec.kind = RecordKind::get_call;
  rec.round = tau;
  rec.party = self.id;
  rec.h = h;
  rec.i = i;
  rt.log().add(std::move(rec));

  const int c = col_for_symbol(i, rt.params());
  for (PartyId q : peers_in_cell(rt, self, self.cell.row, c))
    rt.send(self.id, q, Payload::get(h, i));

  self.pending_gets[{h, i, tau}] = PendingGet{};
  Continuation dl;
  dl.kind = Continuation::Kind::get_deadline;
  dl.h = h;
  dl.i = i;
  dl.call_round = tau;
  rt.schedule_at(tau + 3, self.id, std::move(dl));
}

void continue_get_deadline(Runtime& rt, Node& self, const Handle& h, SymbolIndex i,
                           Round call_round) {
  auto it = self.pending_gets.find({h, i, call_round});
  if (it == self.pending_gets.end() || it->second.resolved) return;
  it->second.resolved = true;
  Record rec;
  rec.kind = RecordKind::get_return;
  rec.round = rt.now();
  rec.party = self.id;
  rec.h = h;
  rec.i = i;
  rec.aux_round = call_round;
  rec.flag = false;
  rt.log().add(std::move(rec));
}

void handle(Runtime& rt, Node& self, const Envelope& env) {
  if (is_subnet_msg(env.payload.kind)) {
    subnet::handle(rt, self, env);
    return;
  }
  const Params& p = rt.params();
  const Payload& pl = env.payload;
  switch (pl.kind) {
    case MsgKind::store: {
      if (!rt.predicate().eval(pl.h, pl.i, pl.x)) return;
      write_symbol(rt, self, pl.h, pl.i, pl.x);
      const int c = col_for_symbol(pl.i, p);
      for (PartyId q : subnet::get_peers(rt, self, col_subnet_id(c, p), /*internal=*/true))
        rt.send(self.id, q, Payload::store_fwd(pl.h, pl.i, pl.x));
      break;
    }
    case MsgKind::store_fwd:
      if (!rt.predicate().eval(pl.h, pl.i, pl.x)) return;
      write_symbol(rt, self, pl.h, pl.i, pl.x);
      break;
    case MsgKind::get: {
      auto it = self.symbols.find({pl.h, pl.i});
      if (it == self.symbols.end()) return;  // only respond if stored
      rt.send(self.id, env.from, Payload::get_rsp(pl.h, pl.i, it->second));
      break;
    }
    case MsgKind::get_rsp: {
      if (!rt.predicate().eval(pl.h, pl.i, pl.x)) return;
      for (auto& [key, pending] : self.pending_gets) {
        if (pending.resolved) continue;
        if (std::get<0>(key) != pl.h || std::get<1>(key) != pl.i) continue;
        if (rt.now() > std::get<2>(key) + 2) continue;
        pending.resolved = true;
        Record rec;
        rec.kind = RecordKind::get_return;
        rec.round = rt.now();
        rec.party = self.id;
        rec.h = pl.h;
        rec.i = pl.i;
        rec.x = pl.x;
        rec.aux_round = std::get<2>(key);
        rec.flag = true;
        rt.log().add(std::move(rec));
      }
      break;
    }
    case MsgKind::join: {
      if (!self.is_bootstrap) return;
      const int c = rt.oracle().col(env.from);
      std::set<PartyId> all;
      for (int r = 1; r <= p.k1; ++r) {
        auto rs = subnet::get_peers(rt, self, row_subnet_id(r, p), /*internal=*/true);
        all.insert(rs.begin(), rs.end());
      }
      std::vector<PartyId> col_peers;
      for (PartyId q : all)
        if (rt.oracle().col(q) == c) col_peers.push_back(q);
      rt.send(self.id, env.from, Payload::join_rsp(std::move(col_peers)));
      break;
    }
    case MsgKind::join_rsp:
      // expected from the join's bootstrap nodes, collected at join_round+2
      if (self.join_round >= 0 && !self.fully_joined && rt.now() <= self.join_round + 2 &&
          self.join_bootstraps.count(env.from))
        self.join_rsp_buffer.push_back(pl.parties);
      break;
    case MsgKind::sync: {
      std::vector<SymbolTriple> snapshot;
      snapshot.reserve(self.symbols.size());
      for (const auto& [key, x] : self.symbols)
        snapshot.push_back(SymbolTriple{key.first, key.second, x});
      const Round lag = rt.sync_reply_delay(self.id, rt.now());
      if (lag <= 0) {
        rt.send(self.id, env.from, Payload::sync_rsp(std::move(snapshot)));
      } else {
        Continuation c;
        c.kind = Continuation::Kind::sync_reply;
        c.to = env.from;
        c.triples = std::move(snapshot);
        rt.schedule_at(rt.now() + lag, self.id, std::move(c));
      }
      break;
    }
    case MsgKind::sync_rsp:
      for (const auto& t : pl.triples)
        if (rt.predicate().eval(t.h, t.i, t.x)) write_symbol(rt, self, t.h, t.i, t.x);
      break;
    default:
      break;
  }
}

}  // namespace grid
}  // namespace rda
