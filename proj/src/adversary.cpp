#include "rdalab/adversary.hpp"

#include <algorithm>
#include <stdexcept>

#include "rdalab/oracle.hpp"

namespace rda {

namespace {

// Deterministic garbage that fails the predicate; one extra byte retries in
// the astronomically unlikely event the junk hits the accepted symbol.
Symbol invalid_symbol(const AdversaryView& view, const Handle& h, SymbolIndex i,
                      std::uint64_t salt) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t v = mix64(salt ^ mix64(attempt ^ 0xbadu));
    Symbol x(8, '\0');
    for (int b = 0; b < 8; ++b) x[b] = char((v >> (8 * b)) & 0xff);
    if (!view.eval || !view.eval(h, i, x)) return x;
  }
}

std::vector<PartyId> first_active(const std::set<PartyId>& from, size_t n) {
  std::vector<PartyId> out;
  for (PartyId p : from) {
    if (out.size() >= n) break;
    out.push_back(p);
  }
  return out;
}

class Passive final : public AdversaryStrategy {};

// Occupies cells from the honest perspective and never answers Get or Sync:
// it joins its own row and column subnets through honest members, then goes
// silent.
class Withholder final : public AdversaryStrategy {
 public:
  explicit Withholder(std::uint64_t seed) : seed_(seed) {}

  AdversaryActions act(const AdversaryView& view) override {
    AdversaryActions out;
    if (view.pool->empty() || view.active_honest->empty()) return out;
    if (view.now % 2 != 0) return out;
    PartyId me = (*view.pool)[next_ % view.pool->size()];
    ++next_;
    const Params& p = *view.params;
    Cell cell = view.oracle->cell(me);
    if (view.protocol == ProtocolKind::grid) {
      // bootstraps accept row joins; column members accept matching columns
      std::vector<PartyId> boots;
      std::vector<PartyId> col_members;
      auto act_map = view.schedule->activity();
      for (PartyId q : *view.active_honest) {
        auto it = act_map.find(q);
        if (it != act_map.end() && it->second.aux == 1 && boots.size() < 2) boots.push_back(q);
        if (view.oracle->col(q) == cell.col && col_members.size() < 3) col_members.push_back(q);
      }
      for (PartyId b : boots)
        out.sends.push_back({me, b, Payload::join_subnet(row_subnet_id(cell.row, p))});
      for (PartyId q : col_members)
        out.sends.push_back({me, q, Payload::join_subnet(col_subnet_id(cell.col, p))});
    } else {
      SubnetId sid = 1 + SubnetId(mix64(seed_ ^ view.now) % std::uint64_t(p.n_subnets()));
      for (PartyId q : first_active(*view.active_honest, 2))
        out.sends.push_back({me, q, Payload::join_subnet(sid)});
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t next_ = 0;
};

// Races honest responders with predicate-failing payloads: spoofed GetRsp
// ahead of the real one, spoofed SyncRsp triples at joiners.
class Spoofer final : public AdversaryStrategy {
 public:
  explicit Spoofer(std::uint64_t seed) : seed_(seed) {}

  void observe(Round now, const std::vector<Envelope>& honest_sends) override {
    (void)now;
    gets_.clear();
    syncs_.clear();
    for (const auto& env : honest_sends) {
      if (env.payload.kind == MsgKind::get && gets_.size() < 20)
        gets_.push_back({env.from, env.payload.h, env.payload.i});
      if (env.payload.kind == MsgKind::sync && syncs_.size() < 20) syncs_.push_back(env.from);
    }
  }

  AdversaryActions act(const AdversaryView& view) override {
    AdversaryActions out;
    if (view.pool->empty()) return out;
    PartyId me = (*view.pool)[0];
    for (const auto& [caller, h, i] : gets_) {
      Symbol junk = invalid_symbol(view, h, i, seed_ ^ std::uint64_t(view.now));
      out.sends.push_back({me, caller, Payload::get_rsp(h, i, junk)});
    }
    for (PartyId joiner : syncs_) {
      Handle h = "spoofed";
      SymbolIndex i = 1;
      std::vector<SymbolTriple> bad{{h, i, invalid_symbol(view, h, i, seed_ ^ 0x5151u)}};
      out.sends.push_back({me, joiner, Payload::sync_rsp(std::move(bad))});
    }
    gets_.clear();
    syncs_.clear();
    return out;
  }

 private:
  std::uint64_t seed_;
  std::vector<std::tuple<PartyId, Handle, SymbolIndex>> gets_;
  std::vector<PartyId> syncs_;
};

// Crowds subnets with throwaway identities every round.
class Flooder final : public AdversaryStrategy {
 public:
  explicit Flooder(std::uint64_t seed) : seed_(seed) {}

  AdversaryActions act(const AdversaryView& view) override {
    AdversaryActions out;
    if (view.pool->empty() || view.active_honest->empty()) return out;
    const Params& p = *view.params;
    PartyId me = (*view.pool)[next_++ % view.pool->size()];
    for (int k = 0; k < 4; ++k) {
      SubnetId sid = 1 + SubnetId((view.now * 4 + k) % p.n_subnets());
      std::uint64_t salt = mix64(seed_ ^ std::uint64_t(view.now * 31 + k));
      auto targets = first_active(*view.active_honest, 8);
      for (size_t t = 0; t < std::min<size_t>(2, targets.size()); ++t)
        out.sends.push_back({me, targets[(salt + t) % targets.size()], Payload::join_subnet(sid)});
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t next_ = 0;
};

// Appends its own ids to every scheduled join's bootstrap list and answers
// the resulting Join requests with malicious-only column peers.
class EclipseJoin final : public AdversaryStrategy {
 public:
  explicit EclipseJoin(std::uint64_t seed) : seed_(seed) {}

  void observe(Round now, const std::vector<Envelope>& honest_sends) override {
    (void)now;
    joins_.clear();
    for (const auto& env : honest_sends)
      if (env.payload.kind == MsgKind::join && !is_honest_id(env.to) && joins_.size() < 20)
        joins_.push_back({env.to, env.from});
  }

  AdversaryActions act(const AdversaryView& view) override {
    AdversaryActions out;
    if (view.pool->empty()) return out;
    for (const auto& [me, joiner] : joins_) {
      int c = view.oracle->col(joiner);
      std::vector<PartyId> fake;
      for (PartyId m : *view.pool) {
        if (view.oracle->col(m) == c) fake.push_back(m);
        if (fake.size() >= 3) break;
      }
      out.sends.push_back({me, joiner, Payload::join_rsp(std::move(fake))});
    }
    joins_.clear();
    auto it = view.schedule->joins.find(view.now + 1);
    if (it != view.schedule->joins.end()) {
      for (const auto& spec : it->second) {
        std::vector<PartyId> extras;
        for (size_t k = 0; k < 2 && k < view.pool->size(); ++k)
          extras.push_back((*view.pool)[(next_ + k) % view.pool->size()]);
        next_ += 2;
        out.extra_bootstraps[spec.party] = std::move(extras);
      }
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t next_ = 0;
  std::vector<std::pair<PartyId, PartyId>> joins_;
};

// Leaves content alone and attacks scheduling instead, alternating between
// full reversal and a seeded shuffle of each round's items.
class Reorderer final : public AdversaryStrategy {
 public:
  AdversaryActions act(const AdversaryView& view) override {
    AdversaryActions out;
    out.order_override =
        view.now % 2 == 0 ? OrderPolicy::reversed : OrderPolicy::shuffled;
    return out;
  }
};

}  // namespace

std::vector<std::string> strategy_catalog() {
  return {"passive", "withholder", "spoofer", "flooder", "eclipse_join", "reorderer"};
}

std::unique_ptr<AdversaryStrategy> make_strategy(const std::string& name, std::uint64_t seed) {
  if (name == "passive") return std::make_unique<Passive>();
  if (name == "withholder") return std::make_unique<Withholder>(seed);
  if (name == "spoofer") return std::make_unique<Spoofer>(seed);
  if (name == "flooder") return std::make_unique<Flooder>(seed);
  if (name == "eclipse_join") return std::make_unique<EclipseJoin>(seed);
  if (name == "reorderer") return std::make_unique<Reorderer>();
  throw std::invalid_argument("unknown adversary strategy: " + name);
}

}  // namespace rda
