#include "rdalab/audit.hpp"

#include <algorithm>
#include <sstream>

namespace rda {
namespace audit {

namespace {

std::string describe_party(PartyId p) { return std::to_string(p); }

// A short excerpt of the records touching (h, i) inside the window, for
// counterexample reports.
std::string timeline_excerpt(const EventLog& log, const Handle& h, SymbolIndex i, Round from,
                             Round to) {
  std::ostringstream os;
  int lines = 0;
  for (const auto& r : log.records) {
    if (r.round < from || r.round > to) continue;
    bool relevant = false;
    switch (r.kind) {
      case RecordKind::store_call:
      case RecordKind::get_call:
      case RecordKind::get_return:
      case RecordKind::symbol_write:
        relevant = r.h == h && r.i == i;
        break;
      case RecordKind::env:
        relevant = (r.msg == MsgKind::store || r.msg == MsgKind::store_fwd ||
                    r.msg == MsgKind::get || r.msg == MsgKind::get_rsp) &&
                   r.h == h && r.i == i;
        break;
      default:
        break;
    }
    if (!relevant) continue;
    os << "\n    " << r.round << ' ' << to_string(r.kind);
    if (r.kind == RecordKind::env)
      os << ' ' << to_string(r.msg) << ' ' << r.party << "->" << r.other;
    else
      os << " p=" << r.party;
    if (++lines >= 14) {
      os << "\n    ...";
      break;
    }
  }
  return os.str();
}

}  // namespace

EventQuery::EventQuery(const EventLog& log)
    : log_(&log),
      params_(log.header.params),
      oracle_(log.header.oracle_seed, log.header.params),
      optimized_(log.header.optimized) {
  build_from_records(log);
}

EventQuery::EventQuery(const Params& params, const Schedule& schedule, std::uint64_t oracle_seed)
    : params_(params), oracle_(oracle_seed, params) {
  parties_ = schedule.activity();
  for (const auto& [p, a] : parties_) {
    if (a.initial) fully_joined_[p] = 0;
    auto& occ = cells_[{oracle_.row(p), oracle_.col(p)}];
    occ.by_join.push_back({a.join, a.leave});
  }
  for (auto& [cell, occ] : cells_) {
    (void)cell;
    std::sort(occ.by_join.begin(), occ.by_join.end());
    occ.prefix_max_leave.resize(occ.by_join.size());
    Round best = -1;
    for (size_t k = 0; k < occ.by_join.size(); ++k) {
      best = std::max(best, occ.by_join[k].second);
      occ.prefix_max_leave[k] = best;
    }
  }
}

void EventQuery::build_from_records(const EventLog& log) {
  for (size_t idx = 0; idx < log.records.size(); ++idx) {
    const Record& r = log.records[idx];
    switch (r.kind) {
      case RecordKind::init: {
        auto& a = parties_[r.party];
        a.join = r.round;
        a.initial = true;
        a.aux = r.flag ? 1 : 0;
        fully_joined_[r.party] = r.round;
        break;
      }
      case RecordKind::join_start: {
        auto& a = parties_[r.party];
        a.join = r.round;
        a.aux = r.flag ? 1 : 0;
        break;
      }
      case RecordKind::join_finish:
        if (!fully_joined_.count(r.party)) fully_joined_[r.party] = r.round;
        break;
      case RecordKind::leave:
        parties_[r.party].leave = r.round;
        break;
      case RecordKind::create_subnet:
        creates_[r.sid].push_back({r.round, r.party, r.parties});
        break;
      case RecordKind::join_subnet:
        sub_joins_[r.sid].push_back({r.round, r.party, r.other});
        break;
      case RecordKind::get_peers:
        peers_calls_.push_back({r.round, r.party, r.sid, idx});
        break;
      case RecordKind::store_call:
        stores_.push_back({r.round, r.party, r.h, r.i, r.x, r.flag});
        break;
      case RecordKind::get_call:
        gets_.push_back({r.round, r.party, r.h, r.i});
        break;
      case RecordKind::get_return: {
        auto key = std::make_tuple(r.party, r.h, r.i, r.aux_round);
        if (!returns_.count(key))
          returns_[key] = {r.round, r.flag ? std::optional<Symbol>(r.x) : std::nullopt};
        break;
      }
      case RecordKind::symbol_write: {
        auto& per_party = first_write_[{r.h, r.i}];
        if (!per_party.count(r.party)) per_party[r.party] = {r.round, r.x};
        break;
      }
      default:
        break;
    }
  }
  for (const auto& [p, a] : parties_) {
    if (!is_honest_id(p)) continue;
    auto& occ = cells_[{oracle_.row(p), oracle_.col(p)}];
    occ.by_join.push_back({a.join, a.leave});
  }
  for (auto& [cell, occ] : cells_) {
    (void)cell;
    std::sort(occ.by_join.begin(), occ.by_join.end());
    occ.prefix_max_leave.resize(occ.by_join.size());
    Round best = -1;
    for (size_t k = 0; k < occ.by_join.size(); ++k) {
      best = std::max(best, occ.by_join[k].second);
      occ.prefix_max_leave[k] = best;
    }
  }
}

bool EventQuery::active(PartyId p, Round tau) const {
  auto it = parties_.find(p);
  return it != parties_.end() && it->second.join <= tau && tau <= it->second.leave;
}

bool EventQuery::active_duration(PartyId p, Round tau0, Round tau1) const {
  if (tau0 > tau1) return false;
  auto it = parties_.find(p);
  return it != parties_.end() && it->second.join <= tau0 && tau1 <= it->second.leave;
}

std::optional<Round> EventQuery::fully_joined_round(PartyId p) const {
  auto it = fully_joined_.find(p);
  if (it == fully_joined_.end()) return std::nullopt;
  return it->second;
}

bool EventQuery::fully_joined(PartyId p, Round tau) const {
  auto fj = fully_joined_round(p);
  return fj && *fj <= tau && active(p, tau);
}

bool EventQuery::fully_joined_duration(PartyId p, Round tau0, Round tau1) const {
  auto fj = fully_joined_round(p);
  return fj && *fj <= tau0 && active_duration(p, tau0, tau1);
}

bool EventQuery::created_subnet(SubnetId sid, std::set<PartyId>* members) const {
  auto it = creates_.find(sid);
  if (it == creates_.end() || it->second.empty()) return false;
  const std::vector<PartyId>& first = it->second.front().members;
  std::set<PartyId> expect(first.begin(), first.end());
  std::set<PartyId> callers;
  for (const auto& call : it->second) {
    if (!is_honest_id(call.party)) continue;
    if (call.round != 0) return false;  // stray later creation
    if (std::set<PartyId>(call.members.begin(), call.members.end()) != expect) return false;
    callers.insert(call.party);
  }
  for (PartyId p : expect)
    if (!is_honest_id(p) || !callers.count(p)) return false;
  for (PartyId p : callers)
    if (!expect.count(p)) return false;
  if (auto jt = sub_joins_.find(sid); jt != sub_joins_.end())
    for (const auto& j : jt->second)
      if (j.round == 0 && is_honest_id(j.party)) return false;
  if (members) *members = std::move(expect);
  return true;
}

void EventQuery::compute_anchors() const {
  if (anchors_done_) return;
  anchors_done_ = true;
  std::set<SubnetId> sids;
  for (const auto& [sid, v] : creates_) {
    (void)v;
    sids.insert(sid);
  }
  for (const auto& [sid, v] : sub_joins_) {
    (void)v;
    sids.insert(sid);
  }
  const Round delay = params_.subnet_delay;
  for (SubnetId sid : sids) {
    auto& anchor = anchors_[sid];
    std::set<PartyId> created;
    if (created_subnet(sid, &created))
      for (PartyId p : created) anchor[p] = 0;
    // joined-properly is inductive: keep relaxing until no join qualifies anew
    const auto jt = sub_joins_.find(sid);
    if (jt != sub_joins_.end()) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto& j : jt->second) {
          if (!is_honest_id(j.party) || !is_honest_id(j.via)) continue;
          auto via_it = anchor.find(j.via);
          if (via_it == anchor.end() || via_it->second > j.round) continue;
          if (!active_duration(j.via, j.round, j.round + delay)) continue;
          Round cand = j.round + delay;
          auto self_it = anchor.find(j.party);
          if (self_it == anchor.end() || cand < self_it->second) {
            anchor[j.party] = cand;
            changed = true;
          }
        }
      }
    }
    auto& members = member_lists_[sid];
    for (const auto& [p, a] : anchor) {
      (void)a;
      members.push_back(p);
    }
  }
}

std::optional<Round> EventQuery::subnet_anchor(SubnetId sid, PartyId p) const {
  compute_anchors();
  auto sit = anchors_.find(sid);
  if (sit == anchors_.end()) return std::nullopt;
  auto it = sit->second.find(p);
  if (it == sit->second.end()) return std::nullopt;
  return it->second;
}

const std::vector<PartyId>& EventQuery::subnet_members(SubnetId sid) const {
  compute_anchors();
  static const std::vector<PartyId> empty;
  auto it = member_lists_.find(sid);
  return it == member_lists_.end() ? empty : it->second;
}

bool EventQuery::is_in_subnet(SubnetId sid, PartyId p, Round tau) const {
  auto a = subnet_anchor(sid, p);
  return a && *a <= tau && active(p, tau);
}

bool EventQuery::stays_in_subnet(SubnetId sid, PartyId p, Round tau0, Round tau1) const {
  auto a = subnet_anchor(sid, p);
  return a && *a <= tau0 && active_duration(p, tau0, tau1);
}

bool EventQuery::peer_obligated(SubnetId sid, PartyId peer) const {
  if (!optimized_) return true;
  if (!is_row_subnet(sid, params_)) return true;
  return oracle_.row(peer) == subnet_row(sid, params_);
}

bool EventQuery::subnetprot_good(Round t) const {
  if (!subnet_good_until_) {
    Round first_bad = Schedule::kNever;
    for (const auto& call : peers_calls_) {
      if (!is_honest_id(call.party) || call.round >= first_bad) continue;
      if (!is_in_subnet(call.sid, call.party, call.round)) continue;
      const auto& result = log_->records[call.record].parties;
      std::set<PartyId> have(result.begin(), result.end());
      for (PartyId q : subnet_members(call.sid)) {
        if (!is_honest_id(q) || q == call.party) continue;
        if (!is_in_subnet(call.sid, q, call.round)) continue;
        if (!peer_obligated(call.sid, q)) continue;
        if (!have.count(q)) {
          first_bad = call.round;
          break;
        }
      }
    }
    subnet_good_until_ = first_bad;
  }
  return t < *subnet_good_until_;
}

bool EventQuery::column_good(int c, Round t, Round delta) const {
  auto key = std::make_pair(c, delta);
  auto it = column_good_until_.find(key);
  if (it == column_good_until_.end()) {
    // max horizon T such that every tau in [0,T] has an occupant covering
    // [tau, tau+delta]; computed by sweeping coverage intervals
    std::vector<std::pair<Round, Round>> cover;  // tau ranges each party covers
    for (const auto& [p, a] : parties_) {
      if (!is_honest_id(p) || oracle_.col(p) != c) continue;
      Round hi = a.leave == Schedule::kNever ? Schedule::kNever : a.leave - delta;
      if (hi < a.join) continue;
      cover.push_back({a.join, hi});
    }
    std::sort(cover.begin(), cover.end());
    Round good_until = -1;
    Round reach = -1;  // covered prefix [0, reach]
    for (const auto& [lo, hi] : cover) {
      if (lo > reach + 1) break;
      reach = std::max(reach, hi);
      if (reach == Schedule::kNever) break;
    }
    good_until = reach;
    it = column_good_until_.emplace(key, good_until).first;
  }
  return t <= it->second;
}

bool EventQuery::good_cell(int r, int c, Round tau1, Round tau2) const {
  auto it = cells_.find({r, c});
  if (it == cells_.end()) return false;
  const CellOcc& occ = it->second;
  const Round need_join = std::max<Round>(0, tau1 - params_.subnet_delay - 2);
  // among occupants with join <= need_join, the longest-lived must reach tau2
  auto upper = std::upper_bound(occ.by_join.begin(), occ.by_join.end(),
                                std::make_pair(need_join, Schedule::kNever));
  if (upper == occ.by_join.begin()) return false;
  size_t idx = size_t(upper - occ.by_join.begin()) - 1;
  return occ.prefix_max_leave[idx] >= tau2;
}

bool EventQuery::in_symbol_storage(PartyId p, Round tau, const Handle& h, SymbolIndex i,
                                   const Symbol& x) const {
  if (!active(p, tau)) return false;
  auto it = first_write_.find({h, i});
  if (it == first_write_.end()) return false;
  auto wit = it->second.find(p);
  return wit != it->second.end() && wit->second.first <= tau - 1 && wit->second.second == x;
}

bool EventQuery::stored_in_column(int c, Round tau0, Round tau1, const Handle& h, SymbolIndex i,
                                  const Symbol& x) const {
  const SubnetId sid = col_subnet_id(c, params_);
  for (PartyId q : subnet_members(sid)) {
    if (!is_honest_id(q)) continue;
    if (!stays_in_subnet(sid, q, tau0, tau1)) continue;
    if (!in_symbol_storage(q, tau1, h, i, x)) return false;
  }
  return true;
}

bool EventQuery::stored_and_retain(int c, Round tau0, Round tau1, const Handle& h, SymbolIndex i,
                                   const Symbol& x) const {
  const SubnetId sid = col_subnet_id(c, params_);
  for (PartyId q : subnet_members(sid)) {
    if (!is_honest_id(q)) continue;
    if (in_symbol_storage(q, tau0, h, i, x) && stays_in_subnet(sid, q, tau0 - 1, tau1)) return true;
  }
  return false;
}

double EventQuery::corruption_fraction_row(int row, Round tau) const {
  auto it = row_fraction_.find(tau);
  if (it == row_fraction_.end()) {
    std::vector<double> per_row(size_t(params_.k1) + 1, 0.0);
    for (int r = 1; r <= params_.k1; ++r) {
      int bad = 0;
      for (int c = 1; c <= params_.k2; ++c)
        if (!good_cell(r, c, std::max<Round>(0, tau - params_.sync_delay), tau + 1)) ++bad;
      per_row[size_t(r)] = double(bad) / double(params_.k2);
    }
    it = row_fraction_.emplace(tau, std::move(per_row)).first;
  }
  return it->second[size_t(row)];
}

std::vector<SymbolIndex> EventQuery::corruption_set(PartyId p, Round tau) const {
  std::vector<SymbolIndex> out;
  const int r = oracle_.row(p);
  const SymbolIndex chunk = params_.chunk();
  for (int c = 1; c <= params_.k2; ++c) {
    if (good_cell(r, c, std::max<Round>(0, tau - params_.sync_delay), tau + 1)) continue;
    for (SymbolIndex i = SymbolIndex(c - 1) * chunk + 1; i <= SymbolIndex(c) * chunk; ++i)
      out.push_back(i);
  }
  return out;
}

std::optional<Symbol> EventQuery::got_result(PartyId p, Round call, const Handle& h, SymbolIndex i,
                                             Round delta) const {
  auto it = returns_.find(std::make_tuple(p, h, i, call));
  if (it == returns_.end()) return std::nullopt;
  const auto& [round, value] = it->second;
  if (!value || round > call + delta) return std::nullopt;
  return value;
}

Verdict verify_rda_robustness(const EventLog& log, double beta) {
  EventQuery q(log);
  Verdict v;
  const Params& p = q.params();

  // Bounded Size
  std::set<int> honest_rows;
  for (const auto& [party, act] : q.parties()) {
    (void)act;
    if (is_honest_id(party)) honest_rows.insert(q.oracle().row(party));
  }
  for (Round tau = 0; tau <= p.lifetime && v.pass; ++tau) {
    for (int r : honest_rows) {
      if (q.corruption_fraction_row(r, tau) > beta + 1e-12) {
        v.pass = false;
        std::ostringstream os;
        os << "corruption bound broken: row " << r << " at round " << tau << " has fraction "
           << q.corruption_fraction_row(r, tau) << " > beta=" << beta;
        v.detail = os.str();
        break;
      }
    }
  }
  if (!v.pass) return v;

  // Correctness if not corrupted, with store-get delay 2 and get delay 2
  for (const auto& g : q.get_calls()) {
    if (!q.fully_joined_duration(g.party, g.round, g.round + 2)) continue;
    for (const auto& s : q.store_calls()) {
      if (!s.valid || s.h != g.h || s.i != g.i) continue;
      if (g.round < s.round + 2 || s.round > p.lifetime || g.round > p.lifetime) continue;
      if (!q.fully_joined(s.party, s.round)) continue;
      const int col = col_for_symbol(s.i, p);
      if (!q.good_cell(q.oracle().row(s.party), col, std::max<Round>(0, s.round - p.sync_delay),
                       s.round + 1))
        continue;  // i in the storer's corruption set
      if (!q.good_cell(q.oracle().row(g.party), col, std::max<Round>(0, g.round - p.sync_delay),
                       g.round + 1))
        continue;  // i in the getter's corruption set
      ++v.checked;
      auto got = q.got_result(g.party, g.round, g.h, g.i, 2);
      if (!got || *got != s.x) {
        v.pass = false;
        std::ostringstream os;
        os << "get obligation missed: storer " << describe_party(s.party) << " stored (h="
           << to_hex(s.h) << ", i=" << s.i << ") at round " << s.round << "; getter "
           << describe_party(g.party) << " called get at round " << g.round << " and "
           << (got ? "returned a different symbol" : "got no valid result within 2 rounds")
           << timeline_excerpt(log, s.h, s.i, s.round, g.round + 2);
        v.detail = os.str();
        return v;
      }
    }
  }
  return v;
}

Verdict verify_subnet_robustness(const EventLog& log) {
  EventQuery q(log);
  Verdict v;
  for (const auto& call : q.get_peers_calls()) {
    if (!is_honest_id(call.party) || call.round > q.lifetime()) continue;
    if (!q.is_in_subnet(call.sid, call.party, call.round)) continue;
    const auto& result = log.records[call.record].parties;
    std::set<PartyId> have(result.begin(), result.end());
    for (PartyId peer : q.subnet_members(call.sid)) {
      if (!is_honest_id(peer) || peer == call.party) continue;
      if (!q.is_in_subnet(call.sid, peer, call.round)) continue;
      if (!q.peer_obligated(call.sid, peer)) continue;
      ++v.checked;
      if (!have.count(peer)) {
        v.pass = false;
        std::ostringstream os;
        os << "subnet robustness broken: get_peers(" << call.sid << ") by " << call.party
           << " at round " << call.round << " misses in-subnet peer " << peer;
        v.detail = os.str();
        return v;
      }
    }
  }
  return v;
}

double audited_beta(const EventLog& log) {
  EventQuery q(log);
  std::set<int> honest_rows;
  for (const auto& [party, act] : q.parties()) {
    (void)act;
    if (is_honest_id(party)) honest_rows.insert(q.oracle().row(party));
  }
  double beta = 0;
  for (Round tau = 0; tau <= q.lifetime(); ++tau)
    for (int r : honest_rows) beta = std::max(beta, q.corruption_fraction_row(r, tau));
  return beta;
}

namespace {

// Schedule reconstructed from the log so the lemma suite can evaluate the
// bootstrap-related admissibility predicates the lemmas assume.
Schedule schedule_from_log(const EventLog& log) {
  Schedule s;
  for (const auto& r : log.records) {
    if (r.kind == RecordKind::init)
      s.add_join(r.round, JoinSpec{r.party, {}, r.flag ? 1 : 0});
    else if (r.kind == RecordKind::join_start) {
      std::vector<PartyId> honest_bootstraps;
      for (PartyId b : r.parties)
        if (is_honest_id(b)) honest_bootstraps.push_back(b);
      s.add_join(r.round, JoinSpec{r.party, honest_bootstraps, r.flag ? 1 : 0});
    } else if (r.kind == RecordKind::leave) {
      s.add_leave(r.round, r.party);
    }
  }
  return s;
}

bool schedule_bootstrap_predicates_hold(const EventLog& log) {
  Schedule s = schedule_from_log(log);
  AdmissibilityReport rep = check_admissible(s, 0, 0, log.header.params);
  return rep.respects_bootstraps && rep.good_bootstraps;
}

struct TripleLess {
  bool operator()(const SymbolTriple& a, const SymbolTriple& b) const {
    return std::tie(a.h, a.i, a.x) < std::tie(b.h, b.i, b.x);
  }
};

}  // namespace

LemmaReport check_lemma_conformance(const EventLog& log) {
  LemmaReport rep;
  EventQuery q(log);
  const Params& p = q.params();
  const Round delay = p.subnet_delay;
  const bool schedule_ok = schedule_bootstrap_predicates_hold(log);
  std::ostringstream err;

  // valid triples seen in this run
  std::set<SymbolTriple, TripleLess> triples;
  for (const auto& s : q.store_calls())
    if (s.valid) triples.insert({s.h, s.i, s.x});

  // Lemma: joining the rows and columns
  if (schedule_ok) {
    const Round t_join = p.lifetime - 1;
    for (const auto& [party, act] : q.parties()) {
      if (!is_honest_id(party) || !rep.joining.pass) continue;
      const Cell cell = q.oracle().cell(party);
      if (!q.column_good(cell.col, t_join, 2 * delay + 2)) continue;
      if (!q.subnetprot_good(t_join + 1)) continue;
      const Round tj = act.join;
      const Round last = std::min(act.leave, p.lifetime);
      for (Round tau = tj; tau <= last; ++tau) {
        ++rep.joining.checked;
        bool expect_row = tj == 0 ? true : tau >= tj + delay;
        bool expect_col = tj == 0 ? true : tau >= tj + delay + 2;
        std::vector<std::pair<SubnetId, bool>> want;
        if (act.aux == 1) {
          for (int r = 1; r <= p.k1; ++r) want.push_back({row_subnet_id(r, p), expect_row});
        } else {
          want.push_back({row_subnet_id(cell.row, p), expect_row});
        }
        if (tj == 0 || tj <= t_join) want.push_back({col_subnet_id(cell.col, p), expect_col});
        for (const auto& [sid, expect] : want) {
          if (q.is_in_subnet(sid, party, tau) != expect) {
            rep.joining.pass = false;
            err.str("");
            err << "joining lemma broken for party " << party << " subnet " << sid << " at round "
                << tau << " (joined " << tj << ", expected " << (expect ? "in" : "out") << ")";
            rep.joining.detail = err.str();
            break;
          }
        }
        if (!rep.joining.pass) break;
      }
    }
  }

  // Lemma: store works
  {
    const Round t_store = p.lifetime - 1;
    for (const auto& s : q.store_calls()) {
      if (!rep.store_works.pass) break;
      if (!s.valid || s.round > t_store || !schedule_ok) continue;
      if (!q.fully_joined(s.party, s.round)) continue;
      const int c = col_for_symbol(s.i, p);
      const int r = q.oracle().row(s.party);
      if (!q.column_good(c, t_store, 2 * delay + 2)) continue;
      if (!q.subnetprot_good(t_store + 1)) continue;
      if (!q.good_cell(r, c, s.round, s.round + 1)) continue;
      ++rep.store_works.checked;
      if (!q.stored_in_column(c, s.round + 1, s.round + 3, s.h, s.i, s.x)) {
        rep.store_works.pass = false;
        err.str("");
        err << "store-works lemma broken: store by " << s.party << " at round " << s.round
            << " (h=" << to_hex(s.h) << ", i=" << s.i << ") not held column-wide at round "
            << s.round + 3;
        rep.store_works.detail = err.str();
      }
    }
  }

  // Lemma: retaining data
  if (schedule_ok) {
    const Round t_keep = p.lifetime - 2;
    for (const auto& t : triples) {
      if (!rep.retaining_data.pass) break;
      const int c = col_for_symbol(t.i, p);
      if (!q.column_good(c, t_keep + 1, 2 * delay + 2)) continue;
      if (!q.subnetprot_good(t_keep + 2)) continue;
      for (Round tau = 0; tau <= t_keep; ++tau) {
        if (!q.stored_in_column(c, tau, tau + p.sync_delay + 1, t.h, t.i, t.x)) continue;
        if (tau + 2 - 1 < 0) continue;
        if (!q.stored_and_retain(c, tau + 2, tau + p.sync_delay, t.h, t.i, t.x)) continue;
        ++rep.retaining_data.checked;
        if (!q.stored_in_column(c, tau + 1, tau + p.sync_delay + 2, t.h, t.i, t.x)) {
          rep.retaining_data.pass = false;
          err.str("");
          err << "retaining lemma broken for (h=" << to_hex(t.h) << ", i=" << t.i << ") column "
              << c << " at round " << tau;
          rep.retaining_data.detail = err.str();
          break;
        }
      }
    }
  }

  // Lemma: get works
  if (schedule_ok) {
    const Round t_get = p.lifetime;
    for (const auto& g : q.get_calls()) {
      if (!rep.get_works.pass) break;
      if (g.round > t_get) continue;
      if (!q.fully_joined_duration(g.party, g.round, g.round + 2)) continue;
      const int c = col_for_symbol(g.i, p);
      const int r = q.oracle().row(g.party);
      if (!q.subnetprot_good(t_get)) continue;
      if (!q.column_good(c, t_get, 2 * delay + 2)) continue;
      for (const auto& t : triples) {
        if (t.h != g.h || t.i != g.i) continue;
        bool option = false;
        if (g.round >= p.sync_delay &&
            q.good_cell(r, c, g.round - p.sync_delay, g.round + 1)) {
          option = q.stored_in_column(c, g.round - p.sync_delay, g.round + 1, t.h, t.i, t.x);
          for (Round tp = g.round - p.sync_delay; !option && tp <= g.round - 1; ++tp)
            option = q.stored_in_column(c, tp, tp + 2, t.h, t.i, t.x);
        } else if (g.round < p.sync_delay && q.good_cell(r, c, 0, g.round + 1)) {
          for (Round tp = 0; !option && tp <= g.round - 1; ++tp)
            option = q.stored_in_column(c, tp, tp + 2, t.h, t.i, t.x);
        }
        if (!option) continue;
        ++rep.get_works.checked;
        auto got = q.got_result(g.party, g.round, g.h, g.i, 2);
        if (!got || *got != t.x) {
          rep.get_works.pass = false;
          err.str("");
          err << "get-works lemma broken: get by " << g.party << " at round " << g.round
              << " (h=" << to_hex(g.h) << ", i=" << g.i << ") did not return the stored symbol";
          rep.get_works.detail = err.str();
          break;
        }
      }
    }
  }

  return rep;
}

std::string LemmaReport::summary() const {
  std::ostringstream os;
  auto line = [&](const char* name, const Verdict& v) {
    os << name << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.checked << " instances)";
    if (!v.pass) os << " " << v.detail;
    os << '\n';
  };
  line("joining", joining);
  line("store_works", store_works);
  line("retaining_data", retaining_data);
  line("get_works", get_works);
  return os.str();
}

}  // namespace audit
}  // namespace rda
