#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>

#include "rdalab/message.hpp"
#include "rdalab/schedule.hpp"

namespace rda {

class CellOracle;

enum class ProtocolKind { subnet_only, grid };

struct InterfaceCall {
  enum class Kind { store, get, get_peers, join_subnet, create_subnet };
  Kind kind = Kind::get_peers;
  PartyId party = 0;
  Handle h;
  SymbolIndex i = 0;
  Symbol x;
  SubnetId sid = 0;
  PartyId via = 0;
  std::vector<PartyId> parties;  // create_subnet member list
};

enum class OrderPolicy { deterministic, reversed, shuffled };

// What the rushing adversary can see when committing its round: everything
// except honesty-protected secrets (there are none; the predicate is public,
// but position-binding keeps valid forgeries out of reach).
struct AdversaryView {
  Round now = 0;
  const Params* params = nullptr;
  const CellOracle* oracle = nullptr;
  const Schedule* schedule = nullptr;
  const std::vector<PartyId>* pool = nullptr;         // pre-registered malicious ids
  const std::set<PartyId>* active_honest = nullptr;
  ProtocolKind protocol = ProtocolKind::grid;
  std::function<bool(const Handle&, SymbolIndex, const Symbol&)> eval;
};

struct MaliciousSend {
  PartyId from = 0;  // must be a pool id; channels are authenticated
  PartyId to = 0;
  Payload payload;
};

struct AdversaryActions {
  std::vector<MaliciousSend> sends;                        // emitted this round
  std::vector<std::pair<Round, InterfaceCall>> calls;      // honest calls, rounds > now
  std::map<PartyId, std::vector<PartyId>> extra_bootstraps;  // for joins at now+1
  std::optional<OrderPolicy> order_override;               // for round now+1
};

// Strategies are deterministic in (seed, observations), so replays agree.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual void observe(Round now, const std::vector<Envelope>& honest_sends) {
    (void)now;
    (void)honest_sends;
  }
  virtual AdversaryActions act(const AdversaryView& view) {
    (void)view;
    return {};
  }
};

// passive, withholder, spoofer, flooder, eclipse_join, reorderer.
std::vector<std::string> strategy_catalog();
std::unique_ptr<AdversaryStrategy> make_strategy(const std::string& name, std::uint64_t seed);

}  // namespace rda
