#include "rdalab/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "rdalab/grid.hpp"
#include "rdalab/subnet.hpp"

namespace rda {

namespace {

int call_kind_rank(InterfaceCall::Kind k) { return int(k); }
int msg_kind_rank(MsgKind k) { return 8 + int(k); }
int cont_kind_rank(Continuation::Kind k) { return 24 + int(k); }

struct TimedCont {
  PartyId who = 0;
  std::uint64_t seq = 0;
  Continuation cont;
};

}  // namespace

std::vector<size_t> intra_round_order(const std::vector<ItemKey>& keys, OrderPolicy policy,
                                      std::uint64_t shuffle_seed) {
  std::vector<size_t> order(keys.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& ka = keys[a];
    const auto& kb = keys[b];
    return std::tie(ka.orderer, ka.kind_rank, ka.seq) < std::tie(kb.orderer, kb.kind_rank, kb.seq);
  });
  if (policy == OrderPolicy::reversed) {
    std::reverse(order.begin(), order.end());
  } else if (policy == OrderPolicy::shuffled) {
    std::uint64_t state = mix64(shuffle_seed);
    for (size_t k = order.size(); k > 1; --k) {
      state = mix64(state);
      std::swap(order[k - 1], order[size_t(state % k)]);
    }
  }
  return order;
}

namespace {

class Engine final : public Runtime {
 public:
  explicit Engine(const ExperimentConfig& cfg)
      : cfg_(cfg),
        oracle_(cfg.oracle_seed, cfg.params),
        predicate_(make_test_predicate(cfg.predicate_seed)) {}

  EventLog run();

  // Runtime
  void send(PartyId from, PartyId to, Payload payload) override {
    Envelope env{from, to, now_, std::move(payload)};
    log_envelope(env);
    if (is_honest_id(from)) round_honest_sends_.push_back(env);
    outbox_.push_back(std::move(env));
  }

  void schedule_at(Round when, PartyId who, Continuation c) override {
    if (when < now_) throw std::logic_error("engine: continuation scheduled in the past");
    timers_[when].push_back(TimedCont{who, next_seq_++, std::move(c)});
  }

  const Params& params() const override { return cfg_.params; }
  const CellOracle& oracle() const override { return oracle_; }
  const Predicate& predicate() const override { return predicate_; }
  bool optimized() const override { return cfg_.optimized; }
  Round now() const override { return now_; }
  EventLog& log() override { return log_; }

  Round sync_reply_delay(PartyId who, Round recv_round) override {
    const Round cap = cfg_.params.sync_delay - 2;
    switch (cfg_.sync_policy) {
      case SyncPolicy::worst_case:
        return cap;
      case SyncPolicy::constant:
        return std::min(cfg_.sync_constant, cap);
      case SyncPolicy::seeded:
        return cap <= 0 ? 0
                        : Round(mix64(cfg_.sync_seed ^ mix64(std::uint64_t(who) ^
                                                             std::uint64_t(recv_round) * 0x9e37u)) %
                                std::uint64_t(cap + 1));
    }
    return cap;
  }

 private:
  struct Item {
    enum class Src { call, message, continuation };
    Src src = Src::message;
    PartyId actor = 0;
    ItemKey key;
    InterfaceCall call;
    Envelope env;
    Continuation cont;
  };

  void validate() const;
  void log_envelope(const Envelope& env);
  Node& node(PartyId p) { return nodes_.at(p); }
  bool active(PartyId p) const { return active_.count(p) > 0; }

  void run_init_round();
  void run_joins();
  void run_items();
  void run_end_continuations();
  void run_leaves();
  void run_adversary();

  void dispatch_call(const InterfaceCall& call);
  void dispatch_message(const Envelope& env);
  void dispatch_continuation(PartyId who, const Continuation& c);

  const ExperimentConfig& cfg_;
  CellOracle oracle_;
  Predicate predicate_;
  EventLog log_;
  std::unique_ptr<AdversaryStrategy> adversary_;
  std::vector<PartyId> pool_;

  Round now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::map<PartyId, Node> nodes_;
  std::set<PartyId> active_;          // honest parties currently active
  std::vector<Envelope> in_flight_;   // sent last round, deliverable this round
  std::vector<Envelope> outbox_;      // sent this round
  std::vector<Envelope> round_honest_sends_;
  std::map<Round, std::vector<std::pair<std::uint64_t, InterfaceCall>>> calls_;
  std::map<Round, std::vector<TimedCont>> timers_;
  std::map<PartyId, std::vector<PartyId>> pending_extra_bootstraps_;
  OrderPolicy round_policy_ = OrderPolicy::deterministic;
  OrderPolicy next_policy_ = OrderPolicy::deterministic;
};

void Engine::validate() const {
  cfg_.params.validate();
  cfg_.schedule.validate();
  if (cfg_.protocol == ProtocolKind::grid && cfg_.params.subnet_delay < 7)
    throw std::invalid_argument("engine: grid runs need subnet_delay >= 7");
  for (const auto& [round, call] : cfg_.workload) {
    if (round < 0 || round > cfg_.params.lifetime)
      throw std::invalid_argument("engine: workload call outside the run's lifetime");
    if (round == 0 && call.kind != InterfaceCall::Kind::create_subnet)
      throw std::invalid_argument("engine: only create_subnet calls are legal at round 0");
    if (!is_honest_id(call.party))
      throw std::invalid_argument("engine: workload calls must target honest parties");
  }
  if (cfg_.protocol == ProtocolKind::grid) {
    for (const auto& [round, call] : cfg_.workload)
      if (call.kind == InterfaceCall::Kind::create_subnet && round == 0)
        throw std::invalid_argument("engine: grid runs create subnets via init only");
  }
}

void Engine::log_envelope(const Envelope& env) {
  Record r;
  r.kind = RecordKind::env;
  r.round = env.sent_at;
  r.party = env.from;
  r.other = env.to;
  r.msg = env.payload.kind;
  switch (env.payload.kind) {
    case MsgKind::store:
    case MsgKind::store_fwd:
    case MsgKind::get_rsp:
      r.h = env.payload.h;
      r.i = env.payload.i;
      r.x = env.payload.x;
      break;
    case MsgKind::get:
      r.h = env.payload.h;
      r.i = env.payload.i;
      break;
    case MsgKind::join_rsp:
      r.count = int(env.payload.parties.size());
      break;
    case MsgKind::sync_rsp:
      r.count = int(env.payload.triples.size());
      break;
    case MsgKind::join_subnet:
    case MsgKind::join_subnet_pull:
      r.sid = env.payload.sid;
      break;
    case MsgKind::join_subnet_pull_rsp:
      r.sid = env.payload.sid;
      r.count = int(env.payload.parties.size());
      break;
    case MsgKind::join_subnet_fwd:
      r.sid = env.payload.sid;
      r.i = SymbolIndex(env.payload.party);
      break;
    case MsgKind::join:
    case MsgKind::sync:
      break;
  }
  log_.add(std::move(r));
}

EventLog Engine::run() {
  validate();
  log_.header.params = cfg_.params;
  log_.header.oracle_seed = cfg_.oracle_seed;
  log_.header.predicate_seed = cfg_.predicate_seed;
  log_.header.protocol = cfg_.protocol == ProtocolKind::grid ? "grid" : "subnet";
  log_.header.optimized = cfg_.optimized;
  log_.header.adversary = cfg_.adversary;
  log_.header.adversary_seed = cfg_.adversary_seed;

  adversary_ = make_strategy(cfg_.adversary, cfg_.adversary_seed);
  for (int k = 0; k < cfg_.malicious_pool; ++k) pool_.push_back(kMaliciousBase + PartyId(k));
  for (const auto& [round, call] : cfg_.workload) calls_[round].push_back({next_seq_++, call});

  // The modeled experiment never terminates; guarantees are only claimed up
  // to `lifetime`. A short epilogue lets calls made in the last rounds
  // resolve inside the trace.
  const Round horizon = cfg_.params.lifetime + 3;
  for (now_ = 0; now_ <= horizon; ++now_) {
    round_policy_ = next_policy_;
    next_policy_ = OrderPolicy::deterministic;
    round_honest_sends_.clear();

    // start-of-round: expiring gets return bottom before new deliveries land
    if (auto it = timers_.find(now_); it != timers_.end()) {
      for (const auto& tc : it->second)
        if (tc.cont.kind == Continuation::Kind::get_deadline && active(tc.who))
          dispatch_continuation(tc.who, tc.cont);
    }

    if (now_ == 0)
      run_init_round();
    else
      run_joins();
    run_items();
    run_end_continuations();
    timers_.erase(now_);
    run_leaves();
    run_adversary();

    in_flight_ = std::move(outbox_);
    outbox_.clear();
  }
  return log_;
}

void Engine::run_init_round() {
  auto it = cfg_.schedule.joins.find(0);
  if (it == cfg_.schedule.joins.end()) return;  // degenerate: nobody to set up
  const std::vector<JoinSpec>& initial = it->second;
  for (const auto& spec : initial) {
    Node n;
    n.id = spec.party;
    n.aux = spec.aux;
    n.cell = oracle_.cell(spec.party);
    n.initial = true;
    n.join_round = 0;
    nodes_.emplace(spec.party, std::move(n));
    active_.insert(spec.party);
  }
  if (cfg_.protocol == ProtocolKind::grid) {
    for (const auto& spec : initial) grid::init(*this, node(spec.party), initial);
  } else {
    // Subnet iInit and iJoin are no-ops; creation calls are the coordinated setup.
    for (const auto& spec : initial) {
      Record r;
      r.kind = RecordKind::init;
      r.round = 0;
      r.party = spec.party;
      r.flag = spec.aux == 1;
      log_.add(std::move(r));
      node(spec.party).fully_joined = true;
    }
    if (auto cit = calls_.find(0); cit != calls_.end())
      for (const auto& [seq, call] : cit->second) {
        (void)seq;
        if (active(call.party))
          subnet::create(*this, node(call.party), call.sid, call.parties);
      }
  }
}

void Engine::run_joins() {
  auto it = cfg_.schedule.joins.find(now_);
  if (it == cfg_.schedule.joins.end()) return;
  for (const auto& spec : it->second) {
    Node n;
    n.id = spec.party;
    n.aux = spec.aux;
    n.cell = oracle_.cell(spec.party);
    n.join_round = now_;
    nodes_.emplace(spec.party, std::move(n));
    active_.insert(spec.party);

    std::vector<PartyId> bootstraps = spec.bootstraps;
    if (auto eit = pending_extra_bootstraps_.find(spec.party);
        eit != pending_extra_bootstraps_.end()) {
      for (PartyId b : eit->second)
        if (std::find(bootstraps.begin(), bootstraps.end(), b) == bootstraps.end())
          bootstraps.push_back(b);
    }

    if (cfg_.protocol == ProtocolKind::grid) {
      grid::join(*this, node(spec.party), bootstraps, spec.aux);
    } else {
      Node& self = node(spec.party);
      self.fully_joined = true;  // the subnet protocol's iJoin completes immediately
      Record r;
      r.kind = RecordKind::join_start;
      r.round = now_;
      r.party = spec.party;
      r.flag = spec.aux == 1;
      r.parties = bootstraps;
      log_.add(r);
      r = Record{};
      r.kind = RecordKind::join_finish;
      r.round = now_;
      r.party = spec.party;
      log_.add(std::move(r));
    }
  }
  pending_extra_bootstraps_.clear();
}

void Engine::run_items() {
  std::vector<Item> items;
  for (Envelope& env : in_flight_) {
    if (!is_honest_id(env.to) || !active(env.to)) continue;  // dropped or adversary-side
    Item it;
    it.src = Item::Src::message;
    it.actor = env.to;
    it.key = ItemKey{env.from, msg_kind_rank(env.payload.kind), next_seq_++};
    it.env = std::move(env);
    items.push_back(std::move(it));
  }
  in_flight_.clear();
  if (now_ > 0) {
    if (auto cit = calls_.find(now_); cit != calls_.end()) {
      for (const auto& [seq, call] : cit->second) {
        Item it;
        it.src = Item::Src::call;
        it.actor = call.party;
        it.key = ItemKey{call.party, call_kind_rank(call.kind), seq};
        it.call = call;
        items.push_back(std::move(it));
      }
    }
  }
  if (auto tit = timers_.find(now_); tit != timers_.end()) {
    for (const auto& tc : tit->second) {
      if (tc.cont.kind != Continuation::Kind::subnet_pull &&
          tc.cont.kind != Continuation::Kind::sync_reply)
        continue;
      Item it;
      it.src = Item::Src::continuation;
      it.actor = tc.who;
      it.key = ItemKey{tc.who, cont_kind_rank(tc.cont.kind), tc.seq};
      it.cont = tc.cont;
      items.push_back(std::move(it));
    }
  }

  std::vector<ItemKey> keys;
  keys.reserve(items.size());
  for (const auto& it : items) keys.push_back(it.key);
  const std::uint64_t shuffle_seed = mix64(cfg_.adversary_seed ^ std::uint64_t(now_));
  for (size_t idx : intra_round_order(keys, round_policy_, shuffle_seed)) {
    const Item& it = items[idx];
    if (!active(it.actor)) continue;
    switch (it.src) {
      case Item::Src::call:
        dispatch_call(it.call);
        break;
      case Item::Src::message:
        dispatch_message(it.env);
        break;
      case Item::Src::continuation:
        dispatch_continuation(it.actor, it.cont);
        break;
    }
  }
}

void Engine::run_end_continuations() {
  auto it = timers_.find(now_);
  if (it == timers_.end()) return;
  // multi-round interface steps act on everything that arrived this round
  std::vector<const TimedCont*> late;
  for (const auto& tc : it->second)
    if (tc.cont.kind == Continuation::Kind::join_collect_cols ||
        tc.cont.kind == Continuation::Kind::join_sync)
      late.push_back(&tc);
  std::sort(late.begin(), late.end(), [](const TimedCont* a, const TimedCont* b) {
    return std::tie(a->who, a->seq) < std::tie(b->who, b->seq);
  });
  for (const TimedCont* tc : late)
    if (active(tc->who)) dispatch_continuation(tc->who, tc->cont);
}

void Engine::run_leaves() {
  auto it = cfg_.schedule.leaves.find(now_);
  if (it == cfg_.schedule.leaves.end()) return;
  for (PartyId p : it->second) {
    active_.erase(p);
    Record r;
    r.kind = RecordKind::leave;
    r.round = now_;
    r.party = p;
    log_.add(std::move(r));
  }
}

void Engine::run_adversary() {
  adversary_->observe(now_, round_honest_sends_);
  AdversaryView view;
  view.now = now_;
  view.params = &cfg_.params;
  view.oracle = &oracle_;
  view.schedule = &cfg_.schedule;
  view.pool = &pool_;
  view.active_honest = &active_;
  view.protocol = cfg_.protocol;
  view.eval = [this](const Handle& h, SymbolIndex i, const Symbol& x) {
    return predicate_.eval(h, i, x);
  };
  AdversaryActions actions = adversary_->act(view);
  for (auto& ms : actions.sends) {
    if (is_honest_id(ms.from))
      throw std::logic_error("adversary: envelope from non-pool id (channels are authenticated)");
    send(ms.from, ms.to, std::move(ms.payload));
  }
  for (auto& [round, call] : actions.calls) {
    if (round <= now_) throw std::logic_error("adversary: interface calls start next round");
    calls_[round].push_back({next_seq_++, std::move(call)});
  }
  pending_extra_bootstraps_ = std::move(actions.extra_bootstraps);
  if (actions.order_override) next_policy_ = *actions.order_override;
}

void Engine::dispatch_call(const InterfaceCall& call) {
  Node& self = node(call.party);
  switch (call.kind) {
    case InterfaceCall::Kind::store:
      if (cfg_.protocol == ProtocolKind::grid) grid::store(*this, self, call.h, call.i, call.x);
      break;
    case InterfaceCall::Kind::get:
      if (cfg_.protocol == ProtocolKind::grid) grid::get(*this, self, call.h, call.i);
      break;
    case InterfaceCall::Kind::get_peers:
      subnet::get_peers(*this, self, call.sid, /*internal=*/false);
      break;
    case InterfaceCall::Kind::join_subnet:
      if (cfg_.protocol == ProtocolKind::subnet_only) subnet::join(*this, self, call.sid, call.via);
      break;
    case InterfaceCall::Kind::create_subnet:
      if (cfg_.protocol == ProtocolKind::subnet_only)
        subnet::create(*this, self, call.sid, call.parties);
      break;
  }
}

void Engine::dispatch_message(const Envelope& env) {
  Node& self = node(env.to);
  if (cfg_.protocol == ProtocolKind::grid)
    grid::handle(*this, self, env);
  else if (is_subnet_msg(env.payload.kind))
    subnet::handle(*this, self, env);
}

void Engine::dispatch_continuation(PartyId who, const Continuation& c) {
  Node& self = node(who);
  switch (c.kind) {
    case Continuation::Kind::subnet_pull:
      subnet::pull_timer(*this, self, c.sid, c.via);
      break;
    case Continuation::Kind::join_collect_cols:
      grid::continue_join_collect(*this, self);
      break;
    case Continuation::Kind::join_sync:
      grid::continue_join_sync(*this, self);
      break;
    case Continuation::Kind::get_deadline:
      grid::continue_get_deadline(*this, self, c.h, c.i, c.call_round);
      break;
    case Continuation::Kind::sync_reply:
      send(who, c.to, Payload::sync_rsp(c.triples));
      break;
  }
}

}  // namespace

EventLog run_experiment(const ExperimentConfig& config) {
  Engine engine(config);
  return engine.run();
}

}  // namespace rda
