#include <doctest.h>

#include <algorithm>
#include <map>

#include "fake_runtime.hpp"
#include "rdalab/engine.hpp"
#include "rdalab/harness.hpp"
#include "rdalab/subnet.hpp"

using namespace rda;
using rda::testing::FakeRuntime;
using rda::testing::make_node;

namespace {

Params subnet_params(int subnets) {
  Params p;
  p.k1 = subnets;
  p.k2 = 1;
  p.m = 1;
  p.subnet_delay = 7;
  p.sync_delay = 2;
  p.lifetime = 40;
  return p;
}

std::vector<PartyId> peers_of(const Node& n, SubnetId sid) {
  auto it = n.peers.find(sid);
  if (it == n.peers.end()) return {};
  return {it->second.begin(), it->second.end()};
}

}  // namespace

TEST_CASE("create unions member sets locally and stays silent") {
  FakeRuntime rt(subnet_params(2), 3, false);
  Node n = make_node(rt, 5, 0);
  subnet::create(rt, n, 1, {5});
  CHECK(peers_of(n, 1) == std::vector<PartyId>{5});
  subnet::create(rt, n, 1, {7, 9});
  CHECK(peers_of(n, 1) == std::vector<PartyId>{5, 7, 9});
  subnet::create(rt, n, 1, {7});  // idempotent union
  CHECK(peers_of(n, 1) == std::vector<PartyId>{5, 7, 9});
  CHECK(rt.sent.empty());
}

TEST_CASE("three creators know each other at round 0") {
  ExperimentConfig cfg;
  cfg.params = subnet_params(1);
  cfg.protocol = ProtocolKind::subnet_only;
  std::vector<PartyId> members = {1, 2, 3};
  for (PartyId p : members) cfg.schedule.add_join(0, JoinSpec{p, {}, 0});
  for (PartyId p : members) {
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::create_subnet;
    call.party = p;
    call.sid = 1;
    call.parties = members;
    cfg.workload.push_back({0, call});
  }
  for (PartyId p : members) {
    InterfaceCall poll;
    poll.kind = InterfaceCall::Kind::get_peers;
    poll.party = p;
    poll.sid = 1;
    cfg.workload.push_back({1, poll});
  }
  EventLog log = run_experiment(cfg);
  int polls = 0;
  for (const auto& r : log.records)
    if (r.kind == RecordKind::get_peers && !r.flag && r.round == 1) {
      CHECK(r.parties == members);
      ++polls;
    }
  CHECK(polls == 3);
}

TEST_CASE("join via an honest hub: the caller knows everyone within 7 rounds") {
  // two parties join the same subnet in the same round via the same hub
  ExperimentConfig cfg = harness::make_two_joiner_subnet(5, 5, 20);
  EventLog log = run_experiment(cfg);
  // pulls answered at tau+5, merged by tau+6: maps complete from tau+7 = 12
  std::map<PartyId, std::vector<PartyId>> last_result;
  for (const auto& r : log.records)
    if (r.kind == RecordKind::get_peers && r.round == 12) last_result[r.party] = r.parties;
  REQUIRE(last_result.count(3));
  REQUIRE(last_result.count(4));
  CHECK(std::count(last_result[3].begin(), last_result[3].end(), 4) == 1);
  CHECK(std::count(last_result[4].begin(), last_result[4].end(), 3) == 1);
}

TEST_CASE("a hub that leaves immediately teaches the joiner nothing") {
  ExperimentConfig cfg;
  cfg.params = subnet_params(1);
  cfg.protocol = ProtocolKind::subnet_only;
  for (PartyId p : {1u, 2u}) cfg.schedule.add_join(0, JoinSpec{p, {}, 0});
  for (PartyId p : {1u, 2u}) {
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::create_subnet;
    call.party = p;
    call.sid = 1;
    call.parties = {1, 2};
    cfg.workload.push_back({0, call});
  }
  cfg.schedule.add_join(4, JoinSpec{3, {}, 0});
  cfg.schedule.add_leave(4, 1);  // hub gone before the announcement lands
  InterfaceCall join;
  join.kind = InterfaceCall::Kind::join_subnet;
  join.party = 3;
  join.sid = 1;
  join.via = 1;
  cfg.workload.push_back({4, join});
  InterfaceCall poll;
  poll.kind = InterfaceCall::Kind::get_peers;
  poll.party = 3;
  poll.sid = 1;
  cfg.workload.push_back({14, poll});

  EventLog log = run_experiment(cfg);
  for (const auto& r : log.records)
    if (r.kind == RecordKind::get_peers && !r.flag && r.party == 3)
      CHECK(r.parties == std::vector<PartyId>{1, 3});
}

TEST_CASE("get_peers on an unknown sid is empty") {
  FakeRuntime rt(subnet_params(3), 3, false);
  Node n = make_node(rt, 5, 0);
  CHECK(subnet::get_peers(rt, n, 2, false).empty());
  subnet::create(rt, n, 2, {1, 2});
  CHECK(subnet::get_peers(rt, n, 2, false) == std::vector<PartyId>{1, 2});
}

TEST_CASE("join_subnet handler forwards the joiner to the snapshot") {
  FakeRuntime rt(subnet_params(2), 3, false);
  Node hub = make_node(rt, 1, 0);
  subnet::create(rt, hub, 1, {1, 9});
  Envelope env{4, 1, 0, Payload::join_subnet(1)};
  subnet::handle(rt, hub, env);
  // forwarded to the snapshot {1, 9}, not to the joiner itself
  REQUIRE(rt.sent.size() == 2);
  for (const auto& e : rt.sent) {
    CHECK(e.payload.kind == MsgKind::join_subnet_fwd);
    CHECK(e.payload.party == 4);
  }
  CHECK(rt.sent[0].to == 1);
  CHECK(rt.sent[1].to == 9);
  CHECK(peers_of(hub, 1) == std::vector<PartyId>{1, 4, 9});
}

TEST_CASE("malformed subnet ids are adversarial noise") {
  FakeRuntime rt(subnet_params(2), 3, false);
  Node n = make_node(rt, 1, 0);
  Envelope env{4, 1, 0, Payload::join_subnet(99)};
  subnet::handle(rt, n, env);
  CHECK(rt.sent.empty());
  CHECK(n.peers.empty());
}

TEST_CASE("optimized profile ignores row traffic on non-bootstrap nodes") {
  Params p;
  p.k1 = 2;
  p.k2 = 2;
  p.m = 2;
  p.subnet_delay = 7;
  p.sync_delay = 2;
  FakeRuntime rt(p, 3, true);
  Node n = make_node(rt, 1, 0);
  const SubnetId own_row = row_subnet_id(n.cell.row, p);
  subnet::create(rt, n, own_row, {1});

  Envelope join{4, 1, 0, Payload::join_subnet(own_row)};
  subnet::handle(rt, n, join);
  CHECK(rt.sent.empty());
  CHECK(peers_of(n, own_row) == std::vector<PartyId>{1});

  Envelope pull{4, 1, 0, Payload::join_subnet_pull(own_row)};
  subnet::handle(rt, n, pull);
  CHECK(rt.sent.empty());
}

TEST_CASE("optimized profile keeps only own-row peers on non-bootstrap nodes") {
  Params p;
  p.k1 = 2;
  p.k2 = 2;
  p.m = 2;
  p.subnet_delay = 7;
  p.sync_delay = 2;
  // find ids in distinct rows
  FakeRuntime probe(p, 17, true);
  PartyId self = 1;
  PartyId same_row = 0, other_row = 0;
  for (PartyId cand = 2; cand < 200 && (!same_row || !other_row); ++cand) {
    if (probe.oracle().row(cand) == probe.oracle().row(self)) {
      if (!same_row) same_row = cand;
    } else if (!other_row) {
      other_row = cand;
    }
  }
  REQUIRE(same_row != 0);
  REQUIRE(other_row != 0);

  FakeRuntime rt(p, 17, true);
  Node n = make_node(rt, self, 0);
  const SubnetId own_row = row_subnet_id(n.cell.row, p);
  Envelope fwd{9, self, 0, Payload::join_subnet_fwd(own_row, same_row)};
  subnet::handle(rt, n, fwd);
  Envelope fwd2{9, self, 0, Payload::join_subnet_fwd(own_row, other_row)};
  subnet::handle(rt, n, fwd2);
  CHECK(peers_of(n, own_row) == std::vector<PartyId>{same_row});
}

TEST_CASE("optimized profile drops column messages from mismatched senders") {
  Params p;
  p.k1 = 1;
  p.k2 = 2;
  p.m = 2;
  p.subnet_delay = 7;
  p.sync_delay = 2;
  FakeRuntime probe(p, 23, true);
  PartyId self = 1;
  const int own_col = probe.oracle().col(self);
  PartyId outsider = 0, insider = 0;
  for (PartyId cand = 2; cand < 200 && (!outsider || !insider); ++cand) {
    if (probe.oracle().col(cand) != own_col) {
      if (!outsider) outsider = cand;
    } else if (!insider) {
      insider = cand;
    }
  }
  REQUIRE(outsider != 0);
  REQUIRE(insider != 0);

  FakeRuntime rt(p, 23, true);
  Node n = make_node(rt, self, 0);
  const SubnetId sid = col_subnet_id(own_col, p);
  Envelope bad{outsider, self, 0, Payload::join_subnet_fwd(sid, outsider)};
  subnet::handle(rt, n, bad);
  CHECK(peers_of(n, sid).empty());
  Envelope good{insider, self, 0, Payload::join_subnet_fwd(sid, insider)};
  subnet::handle(rt, n, good);
  CHECK(peers_of(n, sid) == std::vector<PartyId>{insider});
}

TEST_CASE("peer sets only grow over a run") {
  harness::SubnetRunOptions opt;
  opt.adversary = "flooder";
  ExperimentConfig cfg = harness::make_subnet_experiment(404, opt);
  EventLog log = run_experiment(cfg);
  std::map<std::pair<PartyId, SubnetId>, std::set<PartyId>> seen;
  for (const auto& r : log.records) {
    if (r.kind != RecordKind::get_peers) continue;
    auto& prev = seen[{r.party, r.sid}];
    std::set<PartyId> cur(r.parties.begin(), r.parties.end());
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = std::move(cur);
  }
  CHECK(!seen.empty());
}
