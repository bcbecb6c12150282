#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "rdalab/core.hpp"

namespace rda {

struct JoinSpec {
  PartyId party = 0;
  std::vector<PartyId> bootstraps;  // empty at round 0 (coordinated setup)
  int aux = 0;
};

// Honest join/leave plan. Pure data: generators never see an oracle, and the
// engine only instantiates its oracle after the schedule is fixed.
struct Schedule {
  std::map<Round, std::vector<JoinSpec>> joins;   // round 0 = initial party list
  std::map<Round, std::vector<PartyId>> leaves;

  static constexpr Round kNever = std::numeric_limits<Round>::max();

  void add_join(Round tau, JoinSpec spec);
  void add_leave(Round tau, PartyId p);

  struct Activity {
    Round join = 0;
    Round leave = kNever;  // inclusive; a party is active during join and leave rounds
    int aux = 0;
    bool initial = false;
  };
  // Throws std::invalid_argument if a party joins twice or leaves while inactive.
  std::map<PartyId, Activity> activity() const;

  // Structural checks: unique joins, leaves of active parties only, every
  // honest bootstrap named for a tau-join active at tau-1, malicious ids absent.
  void validate() const;

  std::string serialize() const;
  static Schedule parse(const std::string& text);
};

// overlap_min = max{2*subnet_delay + 2, 2*sync_delay + subnet_delay + 2}.
Round overlap_min(Round subnet_delay, Round sync_delay);

struct AdmissibilityReport {
  bool guarantees_n = true;       // N honest parties with the given overlap, every round
  bool respects_bootstraps = true;  // named bootstraps all have aux = 1
  bool good_bootstraps = true;      // each join has a bootstrap active at tau-delay and tau+delay
  std::string witness;              // first violation, human-readable
  bool admissible() const { return guarantees_n && respects_bootstraps && good_bootstraps; }
};

// Evaluates the three admissibility predicates over rounds [0, params.lifetime].
AdmissibilityReport check_admissible(const Schedule& s, int n, Round overlap,
                                     const Params& params);

struct ChurnSpec {
  int initial = 20;         // parties joining at round 0, anchors not included
  int warmup_target = 2500; // non-anchor active count reached before churn starts
  int batch = 50;           // per-round FIFO leaves and joins once churn begins
  int stay = 50;            // churn-phase lifetime in rounds; must equal warmup_target / batch
  Round rounds = 2800;      // horizon to generate
  int anchors = 2;          // extra always-active aux=1 parties used as bootstraps
  int bootstraps_per_join = 1;
};

// Warmup joins one party per round after the initial set, then steady
// batch-in/batch-out churn. Anchor parties are generated on top of the
// target counts so non-anchor stays come out exactly to `stay`.
Schedule churn_schedule(const ChurnSpec& spec);

}  // namespace rda
