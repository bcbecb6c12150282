#pragma once

#include "rdalab/engine.hpp"

namespace rda {
namespace harness {

// Worker cap for fanning independent runs across threads; RDA_LAB_THREADS
// overrides hardware concurrency.
int worker_count();
void parallel_for(size_t jobs, const std::function<void(size_t)>& body);

struct GridRunOptions {
  int k1 = 2;
  int k2 = 4;
  SymbolIndex chunk = 2;  // m = chunk * k2
  Round subnet_delay = 7;
  Round sync_delay = 4;
  Round lifetime = 120;
  // Always-active honest core, sized so every column holds one with
  // overwhelming probability; churners exercise joins and leaves on top.
  int core_per_column = 30;
  int anchors = 3;  // aux=1 members of the core, named as bootstraps
  int churners = 20;
  Round churn_stay = 45;
  int stores = 25;
  int invalid_stores = 3;
  int gets = 50;
  int missing_gets = 5;  // gets for never-stored indices
  std::string adversary = "passive";
  bool optimized = false;
  int malicious_pool = 48;
  SyncPolicy sync_policy = SyncPolicy::seeded;
};

// A randomized admissible grid experiment with a dense valid store/get
// workload. Deterministic in (seed, options).
ExperimentConfig make_grid_experiment(std::uint64_t seed, const GridRunOptions& opt);

struct SubnetRunOptions {
  int subnets = 3;
  int initial = 4;   // round-0 members of every subnet
  int joiners = 10;
  Round lifetime = 40;
  bool with_leaves = true;
  std::string adversary = "passive";
  int malicious_pool = 24;
};

// Randomized standalone subnet-discovery run; every active party calls
// get_peers on every subnet every round.
ExperimentConfig make_subnet_experiment(std::uint64_t seed, const SubnetRunOptions& opt);

// Deterministic two-joiner configuration: parties joining at join_a/join_b
// (0 means member of the round-0 creation) via an always-active hub,
// get_peers polled densely. Used for the exhaustive pair sweep.
ExperimentConfig make_two_joiner_subnet(Round join_a, Round join_b, Round lifetime);

}  // namespace harness
}  // namespace rda
