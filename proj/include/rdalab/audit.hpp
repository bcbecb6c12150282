#pragma once

#include <optional>
#include <set>

#include "rdalab/event_log.hpp"
#include "rdalab/oracle.hpp"
#include "rdalab/schedule.hpp"

namespace rda {
namespace audit {

// Log-level event predicates. Pure functions of an immutable trace; all
// caches are lazily built and the object is safe to query repeatedly.
class EventQuery {
 public:
  explicit EventQuery(const EventLog& log);

  // Activity-only view: corruption sets and the occupancy good-events are
  // functions of (schedule, oracle) alone, so churn studies can evaluate
  // them without running any protocol.
  EventQuery(const Params& params, const Schedule& schedule, std::uint64_t oracle_seed);

  const Params& params() const { return params_; }
  const CellOracle& oracle() const { return oracle_; }
  Round lifetime() const { return params_.lifetime; }

  // activity events
  bool active(PartyId p, Round tau) const;
  bool active_duration(PartyId p, Round tau0, Round tau1) const;
  bool fully_joined(PartyId p, Round tau) const;
  bool fully_joined_duration(PartyId p, Round tau0, Round tau1) const;
  const std::map<PartyId, Schedule::Activity>& parties() const { return parties_; }
  std::optional<Round> fully_joined_round(PartyId p) const;

  // subnet events
  bool created_subnet(SubnetId sid, std::set<PartyId>* members = nullptr) const;
  bool is_in_subnet(SubnetId sid, PartyId p, Round tau) const;
  bool stays_in_subnet(SubnetId sid, PartyId p, Round tau0, Round tau1) const;
  bool subnetprot_good(Round t) const;
  // Row-subnet membership obligations that survive the optimized profile:
  // peers living in the subnet's own row always do; cross-row entries only
  // на unoptimized runs.
  bool peer_obligated(SubnetId sid, PartyId peer) const;

  // occupancy good events
  bool column_good(int c, Round t, Round delta) const;
  bool good_cell(int r, int c, Round tau1, Round tau2) const;

  // storage events
  bool in_symbol_storage(PartyId p, Round tau, const Handle& h, SymbolIndex i,
                         const Symbol& x) const;
  bool stored_in_column(int c, Round tau0, Round tau1, const Handle& h, SymbolIndex i,
                        const Symbol& x) const;
  bool stored_and_retain(int c, Round tau0, Round tau1, const Handle& h, SymbolIndex i,
                         const Symbol& x) const;

  // corruption sets: indices whose cell (row(p), column-of-index) lacks a
  // long-lived honest occupant around tau
  std::vector<SymbolIndex> corruption_set(PartyId p, Round tau) const;
  double corruption_fraction_row(int row, Round tau) const;  // |C|/m for any party in `row`

  // record access for the verifiers
  struct StoreCall {
    Round round;
    PartyId party;
    Handle h;
    SymbolIndex i;
    Symbol x;
    bool valid;
  };
  struct GetCall {
    Round round;
    PartyId party;
    Handle h;
    SymbolIndex i;
  };
  struct GetPeersCall {
    Round round;
    PartyId party;
    SubnetId sid;
    size_t record;  // index into log records; result list lives there
  };
  const std::vector<StoreCall>& store_calls() const { return stores_; }
  const std::vector<GetCall>& get_calls() const { return gets_; }
  const std::vector<GetPeersCall>& get_peers_calls() const { return peers_calls_; }
  const std::vector<PartyId>& subnet_members(SubnetId sid) const;
  // iGet outcome within the window: value returned in [call, call+delta]
  std::optional<Symbol> got_result(PartyId p, Round call, const Handle& h, SymbolIndex i,
                                   Round delta) const;
  const EventLog* log() const { return log_; }
  std::optional<Round> subnet_anchor(SubnetId sid, PartyId p) const;

 private:
  void build_from_records(const EventLog& log);
  void compute_anchors() const;

  const EventLog* log_ = nullptr;
  Params params_;
  CellOracle oracle_;
  bool optimized_ = false;

  std::map<PartyId, Schedule::Activity> parties_;  // honest parties, activity + aux
  std::map<PartyId, Round> fully_joined_;

  struct CreateCall {
    Round round;
    PartyId party;
    std::vector<PartyId> members;
  };
  struct SubJoinCall {
    Round round;
    PartyId party;
    PartyId via;
  };
  std::map<SubnetId, std::vector<CreateCall>> creates_;
  std::map<SubnetId, std::vector<SubJoinCall>> sub_joins_;
  mutable bool anchors_done_ = false;
  mutable std::map<SubnetId, std::map<PartyId, Round>> anchors_;
  mutable std::map<SubnetId, std::vector<PartyId>> member_lists_;

  std::vector<StoreCall> stores_;
  std::vector<GetCall> gets_;
  std::vector<GetPeersCall> peers_calls_;
  std::map<std::tuple<PartyId, Handle, SymbolIndex, Round>, std::pair<Round, std::optional<Symbol>>>
      returns_;
  std::map<std::pair<Handle, SymbolIndex>, std::map<PartyId, std::pair<Round, Symbol>>>
      first_write_;

  // per-cell honest occupancy intervals, sorted by join with prefix-max leave
  struct CellOcc {
    std::vector<std::pair<Round, Round>> by_join;  // (join, leave)
    std::vector<Round> prefix_max_leave;
  };
  std::map<std::pair<int, int>, CellOcc> cells_;
  mutable std::map<std::pair<int, Round>, Round> column_good_until_;  // (col, delta) -> max T
  mutable std::map<Round, std::vector<double>> row_fraction_;         // tau -> per-row |C|/m
  mutable std::optional<Round> subnet_good_until_;
};

struct Verdict {
  bool pass = true;
  long long checked = 0;  // obligation instances that were actually tested
  std::string detail;     // first counterexample, human-readable
};

// Definition-level robustness of a grid run: corruption sets bounded by
// beta*m, and every store/get obligation outside the corruption sets met
// with store-get delay 2 and get delay 2.
Verdict verify_rda_robustness(const EventLog& log, double beta);

// Subnet robustness (zero error): every get_peers call by an in-subnet
// honest party returns every other in-subnet honest party.
Verdict verify_subnet_robustness(const EventLog& log);

// The audited corruption bound: max |C_p^tau| / m over honest parties and rounds.
double audited_beta(const EventLog& log);

struct LemmaReport {
  Verdict joining;
  Verdict store_works;
  Verdict retaining_data;
  Verdict get_works;
  bool pass() const {
    return joining.pass && store_works.pass && retaining_data.pass && get_works.pass;
  }
  std::string summary() const;
};

// Conformance of a logged run with the deterministic protocol lemmas: each
// conclusion must hold whenever its event preconditions hold on the run.
LemmaReport check_lemma_conformance(const EventLog& log);

}  // namespace audit
}  // namespace rda
