#pragma once

#include <iosfwd>
#include <vector>

#include "rdalab/message.hpp"

namespace rda {

// Every observable event of a run, in execution order. The auditor works
// exclusively from this trace; nodes are long gone when verdicts are made.
enum class RecordKind : std::uint8_t {
  init,          // party ran iInit: flag = aux bit
  join_start,    // party called iJoin: flag = aux bit, parties = bootstraps
  join_finish,   // party's iJoin terminated this round
  leave,         // party left at end of round
  env,           // envelope sent: party = from, other = to, msg = kind
  store_call,    // iStore(h,i,x): flag = predicate verdict
  get_call,      // iGet(h,i)
  get_return,    // iGet returned: flag = got value, x valid iff flag, aux_round = call round
  create_subnet, // iCreateSubnet(sid, parties)
  join_subnet,   // iJoinSubnet(sid, via = other)
  get_peers,     // iGetPeers(sid) -> parties; flag = internal (protocol-originated) call
  symbol_write,  // party wrote symbols[h,i] = x this round
  peer_learned,  // party added other to its sid peer set this round
};

const char* to_string(RecordKind k);

struct Record {
  RecordKind kind = RecordKind::env;
  Round round = 0;
  PartyId party = 0;
  PartyId other = 0;
  SubnetId sid = 0;
  Handle h;
  SymbolIndex i = 0;
  Symbol x;
  bool flag = false;
  Round aux_round = 0;
  MsgKind msg = MsgKind::store;
  int count = 0;  // payload size for peer-list / triple-list envelopes
  std::vector<PartyId> parties;
};

struct RunHeader {
  Params params;
  std::uint64_t oracle_seed = 0;
  std::uint64_t predicate_seed = 0;
  std::string protocol = "grid";  // "grid" | "subnet"
  bool optimized = false;
  std::string adversary = "passive";
  std::uint64_t adversary_seed = 0;
};

class EventLog {
 public:
  RunHeader header;
  std::vector<Record> records;

  void add(Record r) { records.push_back(std::move(r)); }

  // Line-oriented text form: one header line, then one record per line
  // (round, kind, fields). Stable byte-for-byte for identical runs.
  std::string serialize() const;
  void write_to(std::ostream& os) const;

  // Throws std::invalid_argument with a diagnostic on corrupt input.
  static EventLog parse(const std::string& text);
};

}  // namespace rda
