#pragma once

#include "rdalab/event_log.hpp"
#include "rdalab/schedule.hpp"

namespace rda {
namespace metrics {

struct RoundMetrics {
  Round round = 0;
  int active = 0;
  // corrupted-symbol fraction, instantaneous cell-occupancy flavor: a column
  // is bad for a row when the cell holds no active honest party right now
  double max_corruption = 0;
  double mean_corruption = 0;
  // the audit's corruption sets (activity-window flavor); engine logs only
  double max_corruption_windowed = 0;
  // same-row-or-column connection count over active honest parties
  int max_peers = 0;
  double mean_peers = 0;
  // distinct peers accumulated in the node's subnet map; engine logs only
  int max_peers_subnet = 0;
  std::map<MsgKind, long long> envelopes;
};

// Per-round measurements of a completed engine run.
std::vector<RoundMetrics> measure(const EventLog& log);

// The intentionally simplified benchmark simulation: only the schedule and
// the cell assignment exist, no protocol. Rounds 0..horizon (the schedule's
// last event).
std::vector<RoundMetrics> simulate_occupancy(const Schedule& schedule, const Params& params,
                                             std::uint64_t oracle_seed);

// Benchmark CSV: Time_Step, then Corruption_Rows_<k1> and Connections_Rows_<k1>
// columns, one series per entry (max metrics, matching the plots).
std::string simulation_csv(const std::vector<int>& k1_list,
                           const std::vector<std::vector<RoundMetrics>>& series);

// Engine-run CSV with both corruption flavors and both peer counts.
std::string run_csv(const std::vector<RoundMetrics>& rounds);

// Ordinary-least-squares slope plus its standard error over (0.., values).
struct TrendFit {
  double slope = 0;
  double stderr_slope = 0;
};
TrendFit linear_trend(const std::vector<double>& values);

}  // namespace metrics
}  // namespace rda
