#include "rdalab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace rda {
namespace harness {

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RDA_LAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && unsigned(cap) < hw) return cap;
    if (cap >= 1) return cap;
  }
  return int(hw);
}

void parallel_for(size_t jobs, const std::function<void(size_t)>& body) {
  const int workers = std::min<size_t>(size_t(worker_count()), jobs);
  if (workers <= 1) {
    for (size_t k = 0; k < jobs; ++k) body(k);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t k = next.fetch_add(1); k < jobs; k = next.fetch_add(1)) body(k);
    });
  for (auto& t : pool) t.join();
}

namespace {

// Small deterministic generator so runs replay from one seed.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(mix64(seed)) {}
  std::uint64_t next() { return state = mix64(state + 0x9e3779b97f4a7c15ull); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  Round in_range(Round lo, Round hi) {  // inclusive
    return lo + Round(below(std::uint64_t(hi - lo + 1)));
  }
};

}  // namespace

ExperimentConfig make_grid_experiment(std::uint64_t seed, const GridRunOptions& opt) {
  Rng rng(seed);
  ExperimentConfig cfg;
  cfg.protocol = ProtocolKind::grid;
  cfg.optimized = opt.optimized;
  cfg.params.k1 = opt.k1;
  cfg.params.k2 = opt.k2;
  cfg.params.m = opt.chunk * opt.k2;
  cfg.params.subnet_delay = opt.subnet_delay;
  cfg.params.sync_delay = opt.sync_delay;
  cfg.params.lifetime = opt.lifetime;
  cfg.adversary = opt.adversary;
  cfg.adversary_seed = mix64(seed ^ 0xadu);
  cfg.oracle_seed = mix64(seed ^ 0x0au);
  cfg.predicate_seed = mix64(seed ^ 0x9du);
  cfg.sync_policy = opt.sync_policy;
  cfg.sync_seed = mix64(seed ^ 0x57u);
  cfg.malicious_pool = opt.malicious_pool;

  const int core = std::max(1, opt.core_per_column * opt.k2);
  PartyId next_id = 1;
  std::vector<PartyId> anchors;
  for (int k = 0; k < core; ++k) {
    int aux = k < opt.anchors ? 1 : 0;
    if (aux) anchors.push_back(next_id);
    cfg.schedule.add_join(0, JoinSpec{next_id++, {}, aux});
  }
  if (anchors.empty()) {
    anchors.push_back(1);  // degenerate configs still need a bootstrap
    cfg.schedule.joins[0][0].aux = 1;
  }

  struct Churner {
    PartyId id;
    Round join;
    Round leave;
  };
  std::vector<Churner> churners;
  for (int k = 0; k < opt.churners; ++k) {
    Round join = rng.in_range(1, std::max<Round>(1, opt.lifetime - 10));
    Round leave = join + opt.churn_stay + rng.in_range(0, 10);
    Churner ch{next_id++, join, leave};
    std::vector<PartyId> bs;
    bs.push_back(anchors[size_t(rng.below(anchors.size()))]);
    if (rng.below(2) == 0 && anchors.size() > 1)
      bs.push_back(anchors[size_t(rng.below(anchors.size()))]);
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    int aux = rng.below(5) == 0 ? 1 : 0;
    cfg.schedule.add_join(join, JoinSpec{ch.id, bs, aux});
    if (leave <= opt.lifetime) cfg.schedule.add_leave(leave, ch.id);
    churners.push_back(ch);
  }

  Predicate pred = make_test_predicate(cfg.predicate_seed);
  const std::vector<Handle> handles = {"alpha", "beta"};
  auto core_party = [&] { return PartyId(1 + rng.below(std::uint64_t(core))); };
  auto joined_party = [&](Round tau) -> PartyId {
    // churners qualify once their join has terminated and they stay a while
    std::vector<PartyId> ready;
    for (const auto& ch : churners)
      if (ch.join + 2 + opt.subnet_delay + 1 <= tau && ch.leave >= tau + 4) ready.push_back(ch.id);
    if (!ready.empty() && rng.below(3) == 0) return ready[size_t(rng.below(ready.size()))];
    return core_party();
  };

  struct StoredAt {
    Round round;
    Handle h;
    SymbolIndex i;
  };
  std::vector<StoredAt> stored;
  const Round last_store = std::max<Round>(2, opt.lifetime - 8);
  for (int k = 0; k < opt.stores; ++k) {
    Round tau = rng.in_range(1, last_store);
    Handle h = handles[size_t(rng.below(handles.size()))];
    SymbolIndex i = SymbolIndex(1 + rng.below(std::uint64_t(cfg.params.m)));
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::store;
    call.party = joined_party(tau);
    call.h = h;
    call.i = i;
    call.x = pred.reference_symbol(h, i);
    cfg.workload.push_back({tau, call});
    stored.push_back({tau, h, i});
  }
  for (int k = 0; k < opt.invalid_stores; ++k) {
    Round tau = rng.in_range(1, last_store);
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::store;
    call.party = core_party();
    call.h = handles[size_t(rng.below(handles.size()))];
    call.i = SymbolIndex(1 + rng.below(std::uint64_t(cfg.params.m)));
    call.x = "not-the-symbol";
    cfg.workload.push_back({tau, call});
  }
  for (int k = 0; k < opt.gets && !stored.empty(); ++k) {
    const StoredAt& s = stored[size_t(rng.below(stored.size()))];
    Round lo = s.round + 2;
    Round hi = std::min<Round>(opt.lifetime, lo + 40);
    if (lo > hi) continue;
    Round tau = rng.in_range(lo, hi);
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::get;
    call.party = joined_party(tau);
    call.h = s.h;
    call.i = s.i;
    cfg.workload.push_back({tau, call});
  }
  for (int k = 0; k < opt.missing_gets; ++k) {
    Round tau = rng.in_range(2, opt.lifetime);
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::get;
    call.party = core_party();
    call.h = "never-stored";
    call.i = SymbolIndex(1 + rng.below(std::uint64_t(cfg.params.m)));
    cfg.workload.push_back({tau, call});
  }
  // a few external get_peers probes on top of the protocol's internal ones
  for (Round tau = 5; tau <= opt.lifetime; tau += 7) {
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::get_peers;
    call.party = core_party();
    call.sid = SubnetId(1 + rng.below(std::uint64_t(cfg.params.n_subnets())));
    cfg.workload.push_back({tau, call});
  }
  return cfg;
}

ExperimentConfig make_subnet_experiment(std::uint64_t seed, const SubnetRunOptions& opt) {
  Rng rng(seed);
  ExperimentConfig cfg;
  cfg.protocol = ProtocolKind::subnet_only;
  // params only size the subnet id space for standalone runs
  cfg.params.k1 = opt.subnets;
  cfg.params.k2 = 1;
  cfg.params.m = 1;
  cfg.params.lifetime = opt.lifetime;
  cfg.adversary = opt.adversary;
  cfg.adversary_seed = mix64(seed ^ 0xadu);
  cfg.oracle_seed = mix64(seed ^ 0x0au);
  cfg.predicate_seed = mix64(seed ^ 0x9du);
  cfg.malicious_pool = opt.malicious_pool;

  PartyId next_id = 1;
  std::vector<PartyId> members;
  for (int k = 0; k < opt.initial; ++k) {
    members.push_back(next_id);
    cfg.schedule.add_join(0, JoinSpec{next_id++, {}, 0});
  }
  for (int s = 1; s <= opt.subnets; ++s)
    for (PartyId p : members) {
      InterfaceCall call;
      call.kind = InterfaceCall::Kind::create_subnet;
      call.party = p;
      call.sid = s;
      call.parties = members;
      cfg.workload.push_back({0, call});
    }

  struct Member {
    PartyId id;
    Round in_from;  // conservatively when it is surely in (proper joins)
    Round leave = Schedule::kNever;
  };
  std::map<SubnetId, std::vector<Member>> in_subnet;
  for (int s = 1; s <= opt.subnets; ++s)
    for (PartyId p : members) in_subnet[s].push_back({p, 0, Schedule::kNever});

  for (int k = 0; k < opt.joiners; ++k) {
    PartyId id = next_id++;
    Round join = rng.in_range(1, std::max<Round>(1, opt.lifetime - 12));
    Round leave = Schedule::kNever;
    if (opt.with_leaves && rng.below(3) == 0)
      leave = std::min<Round>(opt.lifetime, join + 10 + rng.in_range(0, 10));
    cfg.schedule.add_join(join, JoinSpec{id, {}, 0});
    if (leave != Schedule::kNever) cfg.schedule.add_leave(leave, id);
    SubnetId sid = SubnetId(1 + rng.below(std::uint64_t(opt.subnets)));
    // pick a via that joined properly itself and stays long enough
    auto& mem = in_subnet[sid];
    std::vector<size_t> candidates;
    for (size_t mi = 0; mi < mem.size(); ++mi)
      if (mem[mi].in_from <= join && mem[mi].leave >= join + 7) candidates.push_back(mi);
    if (candidates.empty()) continue;
    const Member via = mem[candidates[size_t(rng.below(candidates.size()))]];
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::join_subnet;
    call.party = id;
    call.sid = sid;
    call.via = via.id;
    cfg.workload.push_back({join, call});
    mem.push_back({id, join + 7, leave});
    // joiners poll their subnet too; calls while inactive are dropped
    for (Round tau = join + 1; tau <= opt.lifetime; tau += 2) {
      InterfaceCall poll;
      poll.kind = InterfaceCall::Kind::get_peers;
      poll.party = id;
      poll.sid = sid;
      cfg.workload.push_back({tau, poll});
    }
  }

  // dense polling: every initial member polls every subnet every round
  for (Round tau = 1; tau <= opt.lifetime; ++tau)
    for (int s = 1; s <= opt.subnets; ++s)
      for (PartyId p : members) {
        InterfaceCall call;
        call.kind = InterfaceCall::Kind::get_peers;
        call.party = p;
        call.sid = s;
        cfg.workload.push_back({tau, call});
      }
  return cfg;
}

ExperimentConfig make_two_joiner_subnet(Round join_a, Round join_b, Round lifetime) {
  ExperimentConfig cfg;
  cfg.protocol = ProtocolKind::subnet_only;
  cfg.params.k1 = 1;
  cfg.params.k2 = 1;
  cfg.params.m = 1;
  cfg.params.lifetime = lifetime;
  cfg.oracle_seed = 7;
  cfg.predicate_seed = 7;

  const PartyId hub = 1, second = 2, a = 3, b = 4;
  std::vector<PartyId> initial = {hub, second};
  if (join_a == 0) initial.push_back(a);
  if (join_b == 0) initial.push_back(b);
  for (PartyId p : initial) cfg.schedule.add_join(0, JoinSpec{p, {}, 0});
  for (PartyId p : initial) {
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::create_subnet;
    call.party = p;
    call.sid = 1;
    call.parties = initial;
    cfg.workload.push_back({0, call});
  }
  auto add_joiner = [&](PartyId p, Round tau) {
    cfg.schedule.add_join(tau, JoinSpec{p, {}, 0});
    InterfaceCall call;
    call.kind = InterfaceCall::Kind::join_subnet;
    call.party = p;
    call.sid = 1;
    call.via = hub;
    cfg.workload.push_back({tau, call});
  };
  if (join_a > 0) add_joiner(a, join_a);
  if (join_b > 0) add_joiner(b, join_b);

  for (Round tau = 1; tau <= lifetime; ++tau)
    for (PartyId p : {hub, second, a, b}) {
      InterfaceCall call;
      call.kind = InterfaceCall::Kind::get_peers;
      call.party = p;
      call.sid = 1;
      cfg.workload.push_back({tau, call});
    }
  return cfg;
}

}  // namespace harness
}  // namespace rda
