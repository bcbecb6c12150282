#pragma once

#include <map>
#include <set>
#include <tuple>

#include "rdalab/event_log.hpp"
#include "rdalab/oracle.hpp"

namespace rda {

// Deferred work a node asked the engine to run in a later round. Kept as
// plain data so runs replay identically.
struct Continuation {
  enum class Kind {
    subnet_pull,       // send join_subnet_pull(sid) to via        (ordered with messages)
    join_collect_cols, // act on buffered join_rsp peer lists      (end of round)
    join_sync,         // refresh column peers, send sync, finish  (end of round)
    get_deadline,      // unresolved get returns bottom            (start of round)
    sync_reply,        // send the delayed sync_rsp snapshot       (ordered with messages)
  };
  Kind kind = Kind::subnet_pull;
  SubnetId sid = 0;
  PartyId via = 0;
  Handle h;
  SymbolIndex i = 0;
  Round call_round = 0;
  PartyId to = 0;
  std::vector<SymbolTriple> triples;
};

struct PendingGet {
  bool resolved = false;
};

// Per-party protocol state. Only the engine's single-threaded round loop
// mutates it.
struct Node {
  PartyId id = 0;
  int aux = 0;
  Cell cell;
  bool is_bootstrap = false;

  // subnet discovery state: sid -> known peers; entries are only ever added
  std::map<SubnetId, std::set<PartyId>> peers;

  // distributed array state
  std::map<std::pair<Handle, SymbolIndex>, Symbol> symbols;
  Round join_round = -1;
  bool initial = false;
  bool fully_joined = false;
  std::set<PartyId> join_bootstraps;                  // join_rsp accepted from these only
  std::vector<std::vector<PartyId>> join_rsp_buffer;  // column peer lists, arrival order
  std::set<PartyId> col_parties;
  std::map<std::tuple<Handle, SymbolIndex, Round>, PendingGet> pending_gets;
};

// Engine services available to protocol code while a handler runs.
class Runtime {
 public:
  virtual ~Runtime() = default;
  virtual void send(PartyId from, PartyId to, Payload payload) = 0;
  virtual void schedule_at(Round when, PartyId who, Continuation c) = 0;
  virtual const Params& params() const = 0;
  virtual const CellOracle& oracle() const = 0;
  virtual const Predicate& predicate() const = 0;
  virtual bool optimized() const = 0;
  virtual Round now() const = 0;
  virtual EventLog& log() = 0;
  // Arbitrary reply lag T <= sync_delay - 2 chosen by the configured policy.
  virtual Round sync_reply_delay(PartyId who, Round recv_round) = 0;
};

}  // namespace rda
