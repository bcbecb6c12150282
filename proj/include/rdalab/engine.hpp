#pragma once

#include "rdalab/adversary.hpp"
#include "rdalab/event_log.hpp"
#include "rdalab/schedule.hpp"

namespace rda {

enum class SyncPolicy {
  worst_case,  // reply lags the full sync_delay - 2 rounds
  constant,    // fixed lag, clamped to the admissible range
  seeded,      // per-(node, round) lag drawn deterministically from sync_seed
};

struct ExperimentConfig {
  Params params;
  ProtocolKind protocol = ProtocolKind::grid;
  bool optimized = false;
  Schedule schedule;
  // Honest interface calls injected by the experiment, merged with calls the
  // adversary schedules. Round-0 entries are only legal for create_subnet
  // (the coordinated setup of standalone subnet runs).
  std::vector<std::pair<Round, InterfaceCall>> workload;
  std::string adversary = "passive";
  std::uint64_t adversary_seed = 0;
  std::uint64_t oracle_seed = 0;
  std::uint64_t predicate_seed = 0;
  int malicious_pool = 0;
  SyncPolicy sync_policy = SyncPolicy::worst_case;
  Round sync_constant = 0;
  std::uint64_t sync_seed = 0;
};

// Executes the round-synchronous experiment: joins, ordered honest
// processing, end-of-round leaves, then the rushing adversary. Two calls
// with the same config produce bit-identical logs.
EventLog run_experiment(const ExperimentConfig& config);

// The default deterministic processing order and the adversary's overrides,
// exposed for direct testing: returns a permutation of [0, keys.size()).
// `shuffled` draws the permutation from the seed, so adversarial orderings
// can reach any arrangement while replays stay reproducible.
struct ItemKey {
  PartyId orderer = 0;  // sender for messages, acting party otherwise
  int kind_rank = 0;
  std::uint64_t seq = 0;
};
std::vector<size_t> intra_round_order(const std::vector<ItemKey>& keys, OrderPolicy policy,
                                      std::uint64_t shuffle_seed = 0);

}  // namespace rda
