#include "rdalab/event_log.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rda {

namespace {

constexpr std::array<const char*, 13> kKindNames = {
    "init",       "join_start", "join_finish", "leave",        "env",
    "store_call", "get_call",   "get_return",  "create_subnet", "join_subnet",
    "get_peers",  "symbol_write", "peer_learned"};

void put_parties(std::ostream& os, const std::vector<PartyId>& ps) {
  os << '[';
  for (size_t k = 0; k < ps.size(); ++k) {
    if (k) os << ',';
    os << ps[k];
  }
  os << ']';
}

std::vector<PartyId> parse_parties(const std::string& tok) {
  if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']')
    throw std::invalid_argument("log: malformed party list: " + tok);
  std::vector<PartyId> out;
  size_t pos = 1;
  while (pos < tok.size() - 1) {
    size_t end = tok.find(',', pos);
    if (end == std::string::npos || end > tok.size() - 1) end = tok.size() - 1;
    out.push_back(PartyId(std::stoul(tok.substr(pos, end - pos))));
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

std::string field(const std::vector<std::string>& toks, const std::string& key) {
  for (const auto& t : toks)
    if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=')
      return t.substr(key.size() + 1);
  throw std::invalid_argument("log: missing field " + key);
}

bool has_field(const std::vector<std::string>& toks, const std::string& key) {
  for (const auto& t : toks)
    if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=')
      return true;
  return false;
}

}  // namespace

const char* to_string(RecordKind k) { return kKindNames[size_t(k)]; }

void EventLog::write_to(std::ostream& os) const {
  const auto& hp = header.params;
  os << "rdalab-log v1 protocol=" << header.protocol << " k1=" << hp.k1 << " k2=" << hp.k2
     << " m=" << hp.m << " subnet_delay=" << hp.subnet_delay << " sync_delay=" << hp.sync_delay
     << " lifetime=" << hp.lifetime << " oracle_seed=" << header.oracle_seed
     << " predicate_seed=" << header.predicate_seed << " optimized=" << (header.optimized ? 1 : 0)
     << " adversary=" << header.adversary << " adversary_seed=" << header.adversary_seed << '\n';
  for (const auto& r : records) {
    os << r.round << ' ' << to_string(r.kind);
    switch (r.kind) {
      case RecordKind::init:
        os << " p=" << r.party << " aux=" << (r.flag ? 1 : 0);
        break;
      case RecordKind::join_start:
        os << " p=" << r.party << " aux=" << (r.flag ? 1 : 0) << " bs=";
        put_parties(os, r.parties);
        break;
      case RecordKind::join_finish:
      case RecordKind::leave:
        os << " p=" << r.party;
        break;
      case RecordKind::env:
        os << " from=" << r.party << " to=" << r.other << " m=" << to_string(r.msg);
        switch (r.msg) {
          case MsgKind::store:
          case MsgKind::store_fwd:
          case MsgKind::get_rsp:
            os << " h=" << to_hex(r.h) << " i=" << r.i << " x=" << to_hex(r.x);
            break;
          case MsgKind::get:
            os << " h=" << to_hex(r.h) << " i=" << r.i;
            break;
          case MsgKind::join_rsp:
          case MsgKind::sync_rsp:
            os << " n=" << r.count;
            break;
          case MsgKind::join_subnet:
          case MsgKind::join_subnet_pull:
            os << " sid=" << r.sid;
            break;
          case MsgKind::join_subnet_pull_rsp:
            os << " sid=" << r.sid << " n=" << r.count;
            break;
          case MsgKind::join_subnet_fwd:
            os << " sid=" << r.sid << " fwd=" << r.i;
            break;
          case MsgKind::join:
          case MsgKind::sync:
            break;
        }
        break;
      case RecordKind::store_call:
        os << " p=" << r.party << " h=" << to_hex(r.h) << " i=" << r.i << " x=" << to_hex(r.x)
           << " ok=" << (r.flag ? 1 : 0);
        break;
      case RecordKind::get_call:
        os << " p=" << r.party << " h=" << to_hex(r.h) << " i=" << r.i;
        break;
      case RecordKind::get_return:
        os << " p=" << r.party << " h=" << to_hex(r.h) << " i=" << r.i << " call=" << r.aux_round
           << " got=" << (r.flag ? 1 : 0);
        if (r.flag) os << " x=" << to_hex(r.x);
        break;
      case RecordKind::create_subnet:
        os << " p=" << r.party << " sid=" << r.sid << " ps=";
        put_parties(os, r.parties);
        break;
      case RecordKind::join_subnet:
        os << " p=" << r.party << " sid=" << r.sid << " via=" << r.other;
        break;
      case RecordKind::get_peers:
        os << " p=" << r.party << " sid=" << r.sid << " internal=" << (r.flag ? 1 : 0) << " ps=";
        put_parties(os, r.parties);
        break;
      case RecordKind::symbol_write:
        os << " p=" << r.party << " h=" << to_hex(r.h) << " i=" << r.i << " x=" << to_hex(r.x);
        break;
      case RecordKind::peer_learned:
        os << " p=" << r.party << " sid=" << r.sid << " peer=" << r.other;
        break;
    }
    os << '\n';
  }
}

std::string EventLog::serialize() const {
  std::ostringstream os;
  write_to(os);
  return os.str();
}

EventLog EventLog::parse(const std::string& text) {
  EventLog log;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("log: empty input");
  {
    auto toks = split_ws(line);
    if (toks.size() < 2 || toks[0] != "rdalab-log" || toks[1] != "v1")
      throw std::invalid_argument("log: bad header line");
    auto& h = log.header;
    h.protocol = field(toks, "protocol");
    h.params.k1 = std::stoi(field(toks, "k1"));
    h.params.k2 = std::stoi(field(toks, "k2"));
    h.params.m = std::stoi(field(toks, "m"));
    h.params.subnet_delay = std::stoll(field(toks, "subnet_delay"));
    h.params.sync_delay = std::stoll(field(toks, "sync_delay"));
    h.params.lifetime = std::stoll(field(toks, "lifetime"));
    h.oracle_seed = std::stoull(field(toks, "oracle_seed"));
    h.predicate_seed = std::stoull(field(toks, "predicate_seed"));
    h.optimized = field(toks, "optimized") == "1";
    h.adversary = field(toks, "adversary");
    h.adversary_seed = std::stoull(field(toks, "adversary_seed"));
  }
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (toks.size() < 2)
      throw std::invalid_argument("log: short record at line " + std::to_string(lineno));
    Record r;
    r.round = std::stoll(toks[0]);
    bool found = false;
    for (size_t k = 0; k < kKindNames.size(); ++k) {
      if (toks[1] == kKindNames[k]) {
        r.kind = RecordKind(k);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("log: unknown record kind '" + toks[1] + "' at line " +
                                  std::to_string(lineno));
    try {
      switch (r.kind) {
        case RecordKind::init:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.flag = field(toks, "aux") == "1";
          break;
        case RecordKind::join_start:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.flag = field(toks, "aux") == "1";
          r.parties = parse_parties(field(toks, "bs"));
          break;
        case RecordKind::join_finish:
        case RecordKind::leave:
          r.party = PartyId(std::stoul(field(toks, "p")));
          break;
        case RecordKind::env: {
          r.party = PartyId(std::stoul(field(toks, "from")));
          r.other = PartyId(std::stoul(field(toks, "to")));
          if (!msg_kind_from_string(field(toks, "m"), r.msg))
            throw std::invalid_argument("bad msg kind");
          if (has_field(toks, "h")) r.h = from_hex(field(toks, "h"));
          if (has_field(toks, "i")) r.i = std::stoi(field(toks, "i"));
          if (has_field(toks, "x")) r.x = from_hex(field(toks, "x"));
          if (has_field(toks, "sid")) r.sid = std::stoi(field(toks, "sid"));
          if (has_field(toks, "fwd")) r.i = std::stoi(field(toks, "fwd"));
          if (has_field(toks, "n")) r.count = std::stoi(field(toks, "n"));
          break;
        }
        case RecordKind::store_call:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.h = from_hex(field(toks, "h"));
          r.i = std::stoi(field(toks, "i"));
          r.x = from_hex(field(toks, "x"));
          r.flag = field(toks, "ok") == "1";
          break;
        case RecordKind::get_call:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.h = from_hex(field(toks, "h"));
          r.i = std::stoi(field(toks, "i"));
          break;
        case RecordKind::get_return:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.h = from_hex(field(toks, "h"));
          r.i = std::stoi(field(toks, "i"));
          r.aux_round = std::stoll(field(toks, "call"));
          r.flag = field(toks, "got") == "1";
          if (r.flag) r.x = from_hex(field(toks, "x"));
          break;
        case RecordKind::create_subnet:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.sid = std::stoi(field(toks, "sid"));
          r.parties = parse_parties(field(toks, "ps"));
          break;
        case RecordKind::join_subnet:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.sid = std::stoi(field(toks, "sid"));
          r.other = PartyId(std::stoul(field(toks, "via")));
          break;
        case RecordKind::get_peers:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.sid = std::stoi(field(toks, "sid"));
          r.flag = field(toks, "internal") == "1";
          r.parties = parse_parties(field(toks, "ps"));
          break;
        case RecordKind::symbol_write:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.h = from_hex(field(toks, "h"));
          r.i = std::stoi(field(toks, "i"));
          r.x = from_hex(field(toks, "x"));
          break;
        case RecordKind::peer_learned:
          r.party = PartyId(std::stoul(field(toks, "p")));
          r.sid = std::stoi(field(toks, "sid"));
          r.other = PartyId(std::stoul(field(toks, "peer")));
          break;
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("log: line " + std::to_string(lineno) + ": " + e.what());
    }
    log.records.push_back(std::move(r));
  }
  return log;
}

}  // namespace rda
